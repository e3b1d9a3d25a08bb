//! Brute-force references. Nothing here is fast; everything here is simple.

use std::collections::BTreeMap;
use std::fmt;

use crate::criterion::{ExponentTriple, QuinticParams};
use crate::field::{FieldElement, GaloisField};
use crate::pointcount::{check_relation, FamilyParams};
use crate::{Error, Result};

/// Largest characteristic accepted by [`expand_power`].
pub const EXPAND_MAX_P: u64 = 19;
/// Largest field order accepted by the `O(q^2)` plane scans.
pub const PLANE_MAX_Q: u64 = 20_000;

/// Sparse trivariate polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly3 {
    terms: BTreeMap<ExponentTriple, FieldElement>,
    degree_bound: u64,
}

impl DensePoly3 {
    pub fn one(field: &GaloisField) -> Self {
        Self::from_terms(field, [(ExponentTriple::new(0, 0, 0), field.one())])
    }

    pub fn from_terms(
        field: &GaloisField,
        terms: impl IntoIterator<Item = (ExponentTriple, FieldElement)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (e, v) in terms {
            let slot = map.entry(e).or_insert(FieldElement::ZERO);
            *slot = field.add(*slot, v);
        }
        map.retain(|_, v: &mut FieldElement| !v.is_zero());
        let degree_bound = map.keys().map(|e| e.degree()).max().unwrap_or(0);
        Self {
            terms: map,
            degree_bound,
        }
    }

    pub fn mul(&self, other: &Self, field: &GaloisField) -> Self {
        let mut out: BTreeMap<ExponentTriple, FieldElement> = BTreeMap::new();
        for (e1, v1) in &self.terms {
            for (e2, v2) in &other.terms {
                let e = ExponentTriple::new(e1.i + e2.i, e1.j + e2.j, e1.k + e2.k);
                let slot = out.entry(e).or_insert(FieldElement::ZERO);
                *slot = field.add(*slot, field.mul(*v1, *v2));
            }
        }
        out.retain(|_, v| !v.is_zero());
        Self {
            terms: out,
            degree_bound: self.degree_bound + other.degree_bound,
        }
    }

    pub fn pow(&self, mut e: u64, field: &GaloisField) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, field);
            }
        }
        acc
    }

    pub fn coefficient(&self, e: ExponentTriple) -> FieldElement {
        self.terms.get(&e).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentTriple, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    /// Sum of all coefficients, i.e. the value at `(1, 1, 1)`.
    pub fn coefficient_sum(&self, field: &GaloisField) -> FieldElement {
        self.terms
            .values()
            .fold(FieldElement::ZERO, |acc, &v| field.add(acc, v))
    }
}

/// `(x y z^3 + s x^5 + t y^5)^(p-1)` by repeated squaring of the trinomial.
pub fn expand_power(params: &QuinticParams) -> Result<DensePoly3> {
    let p = params.p();
    if p > EXPAND_MAX_P {
        return Err(Error::Guard {
            what: "characteristic for dense expansion",
            value: p,
            limit: EXPAND_MAX_P,
        });
    }
    let f = params.field();
    let quintic = DensePoly3::from_terms(
        f,
        [
            (ExponentTriple::new(1, 1, 3), f.one()),
            (ExponentTriple::new(5, 0, 0), params.s()),
            (ExponentTriple::new(0, 5, 0), params.t()),
        ],
    );
    Ok(quintic.pow(p - 1, f))
}

/// `s x^a + t y^a + z^b x^c y^c` with only `b + 2c = a` enforced, so that
/// degenerate characteristics can still be scanned.
#[derive(Debug, Clone)]
pub struct PlaneModel {
    field: GaloisField,
    a: u64,
    b: u64,
    c: u64,
    s: FieldElement,
    t: FieldElement,
}

impl PlaneModel {
    pub fn new(
        field: &GaloisField,
        (a, b, c): (u64, u64, u64),
        s: FieldElement,
        t: FieldElement,
    ) -> Result<Self> {
        check_relation(a, b, c)?;
        Ok(Self {
            field: field.clone(),
            a,
            b,
            c,
            s,
            t,
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    fn guard(&self) -> Result<()> {
        let q = self.field.order();
        if q > PLANE_MAX_Q {
            return Err(Error::Guard {
                what: "field order for plane scan",
                value: q,
                limit: PLANE_MAX_Q,
            });
        }
        Ok(())
    }

    /// Normalised representatives `[1:y:z]`, `[0:1:z]`, `[0:0:1]`.
    fn points(&self) -> impl Iterator<Item = ProjectivePoint> + '_ {
        let f = &self.field;
        let (zero, one) = (f.zero(), f.one());
        let affine = f
            .elements()
            .flat_map(move |y| f.elements().map(move |z| ProjectivePoint { x: one, y, z }));
        let line = f
            .elements()
            .map(move |z| ProjectivePoint { x: zero, y: one, z });
        affine.chain(line).chain(std::iter::once(ProjectivePoint {
            x: zero,
            y: zero,
            z: one,
        }))
    }

    pub fn eval(&self, pt: ProjectivePoint) -> FieldElement {
        let f = &self.field;
        let ProjectivePoint { x, y, z } = pt;
        let cross = f.mul(f.pow(z, self.b), f.mul(f.pow(x, self.c), f.pow(y, self.c)));
        f.add(
            f.add(
                f.mul(self.s, f.pow(x, self.a)),
                f.mul(self.t, f.pow(y, self.a)),
            ),
            cross,
        )
    }

    /// `(∂F/∂x, ∂F/∂y, ∂F/∂z)`.
    pub fn gradient(&self, pt: ProjectivePoint) -> [FieldElement; 3] {
        let f = &self.field;
        let ProjectivePoint { x, y, z } = pt;
        let (a, b, c) = (self.a, self.b, self.c);
        let xc = f.pow(x, c);
        let yc = f.pow(y, c);
        let zb = f.pow(z, b);
        let dx = f.add(
            f.scale(f.mul(self.s, f.pow(x, a - 1)), a),
            f.scale(f.mul(f.pow(x, c - 1), f.mul(yc, zb)), c),
        );
        let dy = f.add(
            f.scale(f.mul(self.t, f.pow(y, a - 1)), a),
            f.scale(f.mul(xc, f.mul(f.pow(y, c - 1), zb)), c),
        );
        let dz = f.scale(f.mul(xc, f.mul(yc, f.pow(z, b - 1))), b);
        [dx, dy, dz]
    }
}

impl From<&FamilyParams> for PlaneModel {
    fn from(params: &FamilyParams) -> Self {
        Self::new(params.field(), params.abc(), params.s(), params.t())
            .expect("family parameters satisfy the plane-model relation")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.x, self.y, self.z)
    }
}

/// Projective `F_q`-points of the (singular) plane model.
pub fn plane_count(model: &PlaneModel) -> Result<u64> {
    model.guard()?;
    Ok(model
        .points()
        .filter(|&pt| model.eval(pt).is_zero())
        .count() as u64)
}

/// `F_q`-points where the form and its three partials all vanish.
pub fn singular_points(model: &PlaneModel) -> Result<Vec<ProjectivePoint>> {
    model.guard()?;
    Ok(model
        .points()
        .filter(|&pt| model.eval(pt).is_zero() && model.gradient(pt).iter().all(|g| g.is_zero()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{coefficient, MonomialSet25};
    use crate::pointcount::count_points;

    fn quintic_plane(p: u64, s: u64, t: u64) -> PlaneModel {
        let f = GaloisField::quadratic(p).unwrap();
        PlaneModel::new(&f, (5, 3, 1), f.from_u64(s), f.from_u64(t)).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let f = GaloisField::prime(7).unwrap();
        let params = QuinticParams::unit(&f).unwrap();
        let poly = expand_power(&params).unwrap();
        assert!(!poly.coefficient(ExponentTriple::new(12, 12, 6)).is_zero());
        assert!(poly.terms().all(|(e, _)| e.k % 3 == 0));
        assert!(poly.terms().all(|(e, _)| e.degree() == 30));
        // F(1,1,1) = 3
        assert_eq!(poly.coefficient_sum(&f), f.pow(f.from_u64(3), 6));

        let f11 = GaloisField::prime(11).unwrap();
        let poly = expand_power(&QuinticParams::unit(&f11).unwrap()).unwrap();
        for (_, _, t) in MonomialSet25::new(11).unwrap().iter() {
            assert!(poly.coefficient(t).is_zero());
        }
        let f23 = GaloisField::prime(23).unwrap();
        assert!(matches!(
            expand_power(&QuinticParams::unit(&f23).unwrap()),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn expansion_agrees_with_criterion() {
        let f = GaloisField::quadratic(13).unwrap();
        let s = f.from_parts(3, 5).unwrap();
        let t = f.from_parts(0, 7).unwrap();
        let params = QuinticParams::new(&f, s, t).unwrap();
        let poly = expand_power(&params).unwrap();
        for (_, _, tr) in MonomialSet25::new(13).unwrap().iter() {
            assert_eq!(poly.coefficient(tr), coefficient(&params, tr).unwrap());
        }
        // F(1,1,1)^(p-1) = (1 + s + t)^(p-1)
        let at_one = f.add(f.one(), f.add(s, t));
        assert_eq!(poly.coefficient_sum(&f), f.pow(at_one, 12));
    }

    #[test]
    fn plane_count_examples() {
        let f = GaloisField::quadratic(11).unwrap();
        let plane =
            plane_count(&PlaneModel::new(&f, (5, 3, 1), f.one(), f.one()).unwrap()).unwrap();
        assert_eq!(plane, 231);
        for p in [7u64, 13] {
            let f = GaloisField::quadratic(p).unwrap();
            let params = FamilyParams::new(&f, 5, 3, 1).unwrap();
            let n = count_points(&params).unwrap().count;
            assert_eq!(plane_count(&PlaneModel::from(&params)).unwrap() + 1, n);
        }
    }

    #[test]
    fn singular_point_examples() {
        let node = |f: &GaloisField| ProjectivePoint {
            x: f.zero(),
            y: f.zero(),
            z: f.one(),
        };
        let m = quintic_plane(7, 1, 1);
        assert_eq!(singular_points(&m).unwrap(), vec![node(m.field())]);
        let m = quintic_plane(11, 2, 2);
        assert_eq!(singular_points(&m).unwrap(), vec![node(m.field())]);
        assert_eq!(singular_points(&m).unwrap()[0].to_string(), "[0:0:1]");

        let f5 = GaloisField::prime(5).unwrap();
        let m = PlaneModel::new(&f5, (5, 3, 1), f5.one(), f5.one()).unwrap();
        let sing = singular_points(&m).unwrap();
        assert!(sing.len() >= 2);
        assert!(sing.iter().any(|pt| pt.z.is_zero()));
        assert!(sing.contains(&ProjectivePoint {
            x: f5.one(),
            y: f5.from_i64(-1),
            z: f5.zero()
        }));
    }

    #[test]
    fn guards() {
        let f = GaloisField::quadratic(151).unwrap();
        let m = PlaneModel::new(&f, (5, 3, 1), f.one(), f.one()).unwrap();
        assert!(matches!(plane_count(&m), Err(Error::Guard { .. })));
        assert!(matches!(singular_points(&m), Err(Error::Guard { .. })));
        assert!(PlaneModel::new(&f, (5, 3, 2), f.one(), f.one()).is_err());
    }
}
