//! Rational points on the nonsingular model of
//! `C : s x^a + t y^a + z^b x^c y^c = 0` with `b + 2c = a`.
//!
//! In the chart `x = 1` the function field is the Kummer extension
//! `z^b = w(y)`, `w(y) = −(s + t y^a) / y^c`, of `F_q(y)`. Every finite
//! `y ≠ 0` contributes `#{z : z^b = w(y)}` points (the affine model is smooth
//! there). Over `y = 0` the function `w` has a pole of order `c` with leading
//! unit `−s`, over `y = ∞` a pole of order `a − c` with leading unit `−t`; the
//! places above them are counted by `#{ξ : ξ^gcd(b, c) = −s}` and
//! `#{ξ : ξ^gcd(b, a−c) = −t}`.

use std::thread;

use num_integer::Integer;

use crate::field::{Degree, FieldElement, GaloisField};
use crate::{Error, Result};

/// Parameters of `C_{p,a,b,c}` over a fixed field `F_q`.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    field: GaloisField,
    a: u64,
    b: u64,
    c: u64,
    s: FieldElement,
    t: FieldElement,
}

pub(crate) fn check_relation(a: u64, b: u64, c: u64) -> Result<()> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::Relation(format!(
            "a, b, c must be positive (got ({a}, {b}, {c}))"
        )));
    }
    if b + 2 * c != a {
        return Err(Error::Relation(format!(
            "b + 2c ≠ a ({b} + 2·{c} = {} but a = {a})",
            b + 2 * c
        )));
    }
    Ok(())
}

impl FamilyParams {
    /// `x^a + y^a + z^b x^c y^c` (that is, `s = t = 1`).
    pub fn new(field: &GaloisField, a: u64, b: u64, c: u64) -> Result<Self> {
        Self::with_coefficients(field, a, b, c, field.one(), field.one())
    }

    /// General `(s, t)` is only supported for the quintic `(5, 3, 1)`.
    pub fn with_coefficients(
        field: &GaloisField,
        a: u64,
        b: u64,
        c: u64,
        s: FieldElement,
        t: FieldElement,
    ) -> Result<Self> {
        check_relation(a, b, c)?;
        let p = field.characteristic();
        if b < 2 {
            return Err(Error::Relation(format!("b must be at least 2 (got {b})")));
        }
        if (a * b).is_multiple_of(p) {
            return Err(Error::UnsupportedCharacteristic {
                p,
                reason: "p divides a·b (wild ramification is not handled)",
            });
        }
        if s.is_zero() || t.is_zero() {
            return Err(Error::Degenerate(format!(
                "s and t must be nonzero (got s = {s}, t = {t})"
            )));
        }
        field.from_parts(s.re(), s.im())?;
        field.from_parts(t.re(), t.im())?;
        let unit = field.one();
        if (a, b, c) != (5, 3, 1) && (s != unit || t != unit) {
            return Err(Error::Relation("coefficients (s, t) other than (1, 1) are only supported for (a, b, c) = (5, 3, 1)".to_string()));
        }
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

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn abc(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    pub fn s(&self) -> FieldElement {
        self.s
    }

    pub fn t(&self) -> FieldElement {
        self.t
    }
}

/// `(ab − a + 2 − gcd(b, a−c) − gcd(b, c)) / 2`.
pub fn genus(a: u64, b: u64, c: u64) -> Result<u64> {
    check_relation(a, b, c)?;
    let num = (a * b + 2) as i64 - a as i64 - b.gcd(&(a - c)) as i64 - b.gcd(&c) as i64;
    assert!(
        num >= 0 && num % 2 == 0,
        "genus numerator {num} must be even and nonnegative"
    );
    Ok(num as u64 / 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HasseWeilBounds {
    /// `q` is a square; the bounds are integers.
    Exact { lower: i64, upper: i64 },
    /// `q = p`; `2g√q` is irrational once `g > 0`.
    Real { lower: f64, upper: f64 },
}

impl HasseWeilBounds {
    fn new(q: u64, g: u64, sqrt_q: Option<u64>) -> Self {
        match sqrt_q {
            Some(r) => {
                let mid = q as i64 + 1;
                let w = 2 * g as i64 * r as i64;
                HasseWeilBounds::Exact {
                    lower: mid - w,
                    upper: mid + w,
                }
            }
            None => {
                let mid = q as f64 + 1.0;
                let w = 2.0 * g as f64 * (q as f64).sqrt();
                HasseWeilBounds::Real {
                    lower: mid - w,
                    upper: mid + w,
                }
            }
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            HasseWeilBounds::Exact { lower, .. } => lower as f64,
            HasseWeilBounds::Real { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            HasseWeilBounds::Exact { upper, .. } => upper as f64,
            HasseWeilBounds::Real { upper, .. } => upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Maximal,
    Minimal,
    Neither,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Maximal => "maximal",
            Status::Minimal => "minimal",
            Status::Neither => "neither",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub p: u64,
    pub q: u64,
    pub genus: u64,
    /// `#C(F_q)` on the nonsingular model.
    pub count: u64,
    /// Points over `y ∈ F_q^×`.
    pub affine: u64,
    /// Places over `y = 0`.
    pub r0: u64,
    /// Places over `y = ∞`.
    pub r_inf: u64,
    pub bounds: HasseWeilBounds,
    pub status: Status,
}

impl CountReport {
    /// `|N − q − 1| ≤ 2g√q`, decided in integers.
    pub fn within_bounds(&self) -> bool {
        let dev = self.count as i128 - self.q as i128 - 1;
        let g = self.genus as i128;
        dev * dev <= 4 * g * g * self.q as i128
    }
}

fn fibre_count(params: &FamilyParams, ys: std::ops::Range<u64>) -> Result<u64> {
    let f = &params.field;
    let mut total = 0;
    for k in ys {
        let y = f.element(k);
        // w(y) = -(s + t y^a) / y^c
        let num = f.neg(f.add(params.s, f.mul(params.t, f.pow(y, params.a))));
        let den = f.inv(f.pow(y, params.c)).expect("y is nonzero");
        total += f.nth_root_count(f.mul(num, den), params.b)?;
    }
    Ok(total)
}

pub fn count_points(params: &FamilyParams) -> Result<CountReport> {
    count_points_with_threads(params, 1)
}

/// Same as [`count_points`], with the sum over `y` split into `threads`
/// contiguous ranges. The result does not depend on `threads`.
pub fn count_points_with_threads(params: &FamilyParams, threads: usize) -> Result<CountReport> {
    let f = &params.field;
    let q = f.order();
    let threads = threads.clamp(1, 256) as u64;
    // indices 1..q enumerate F_q^×
    let span = (q - 1).div_ceil(threads);
    let ranges: Vec<_> = (0..threads)
        .map(|w| (1 + w * span).min(q)..(1 + (w + 1) * span).min(q))
        .filter(|r| !r.is_empty())
        .collect();
    let affine = if ranges.len() == 1 {
        fibre_count(params, ranges[0].clone())?
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .cloned()
                .map(|r| scope.spawn(move || fibre_count(params, r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("counting worker panicked"))
                .sum::<Result<u64>>()
        })?
    };

    let (a, b, c) = (params.a, params.b, params.c);
    let r0 = f.nth_root_count(f.neg(params.s), b.gcd(&c))?;
    let r_inf = f.nth_root_count(f.neg(params.t), b.gcd(&(a - c)))?;
    let count = affine + r0 + r_inf;

    let g = genus(a, b, c)?;
    let p = f.characteristic();
    let sqrt_q = (f.degree() == Degree::Two).then_some(p);
    let bounds = HasseWeilBounds::new(q, g, sqrt_q);
    let status = match bounds {
        HasseWeilBounds::Exact { lower, upper } if g > 0 => {
            if count as i64 == upper {
                Status::Maximal
            } else if count as i64 == lower {
                Status::Minimal
            } else {
                Status::Neither
            }
        }
        _ => Status::Neither,
    };
    let report = CountReport {
        p,
        q,
        genus: g,
        count,
        affine,
        r0,
        r_inf,
        bounds,
        status,
    };
    assert!(
        report.within_bounds(),
        "Hasse–Weil bound violated: {report:?}"
    );
    Ok(report)
}

/// Projective points of `1 + Y^{p+1} + Z^{p+1} = 0` over `F_{p^2}`, by direct
/// scan of the affine plane plus the line at infinity.
pub fn hermitian_count(p: u64) -> Result<u64> {
    let f = GaloisField::quadratic(p)?;
    let e = p + 1;
    let powers: Vec<FieldElement> = f.elements().map(|v| f.pow(v, e)).collect();
    let one = f.one();
    let mut affine = 0u64;
    for &py in &powers {
        let lhs = f.add(one, py);
        affine += powers
            .iter()
            .filter(|&&pz| f.add(lhs, pz).is_zero())
            .count() as u64;
    }
    // X = 0: [0:1:Z] with 1 + Z^{p+1} = 0; [0:0:1] is never on the curve
    let at_infinity = powers
        .iter()
        .filter(|&&pz| f.add(one, pz).is_zero())
        .count() as u64;
    Ok(affine + at_infinity)
}
