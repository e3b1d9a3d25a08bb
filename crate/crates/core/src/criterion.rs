//! Superspeciality of the nonsingular model of `x y z^3 + s x^5 + t y^5 = 0`.
//!
//! The curve is superspecial iff 25 specific coefficients of `F^(p-1)`
//! vanish. By the multinomial theorem every term of `F^(p-1)` has the form
//! `s^β t^γ (p-1)!/(α! β! γ!) x^(α+5β) y^(α+5γ) z^(3α)` with
//! `α + β + γ = p - 1`, so each coefficient is read off from the (at most one)
//! integer solution of that linear system.

use std::fmt;

use crate::field::{FieldElement, GaloisField};
use crate::{Error, Result};

/// Generator base for the 25 monomials: the matrix entry at `(u, u')` is the
/// exponent `p·u − u'`.
pub const GENERATOR_BASE: [[u64; 3]; 5] = [[3, 1, 1], [1, 3, 1], [2, 2, 1], [2, 1, 2], [1, 2, 2]];

/// `F = x y z^3 + s x^5 + t y^5` over a field `F_q` of characteristic `p > 5`.
#[derive(Debug, Clone)]
pub struct QuinticParams {
    field: GaloisField,
    s: FieldElement,
    t: FieldElement,
}

impl QuinticParams {
    pub fn new(field: &GaloisField, s: FieldElement, t: FieldElement) -> Result<Self> {
        let p = field.characteristic();
        if p <= 5 {
            return Err(Error::UnsupportedCharacteristic {
                p,
                reason: "the quintic has at least two singular points when p = 5 and the \
                         criterion needs p > 5",
            });
        }
        if s.is_zero() || t.is_zero() {
            return Err(Error::Degenerate(format!(
                "s and t must be nonzero (got s = {s}, t = {t})"
            )));
        }
        // both coefficients must live in the chosen field
        field.from_parts(s.re(), s.im())?;
        field.from_parts(t.re(), t.im())?;
        Ok(Self {
            field: field.clone(),
            s,
            t,
        })
    }

    /// `s = t = 1`.
    pub fn unit(field: &GaloisField) -> Result<Self> {
        Self::new(field, field.one(), field.one())
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn s(&self) -> FieldElement {
        self.s
    }

    pub fn t(&self) -> FieldElement {
        self.t
    }
}

/// Exponent vector `(i, j, k)` of the monomial `x^i y^j z^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTriple {
    pub i: u64,
    pub j: u64,
    pub k: u64,
}

impl ExponentTriple {
    pub const fn new(i: u64, j: u64, k: u64) -> Self {
        Self { i, j, k }
    }

    pub fn degree(self) -> u64 {
        self.i + self.j + self.k
    }

    /// `(j, i, k)`.
    pub fn mirrored(self) -> Self {
        Self::new(self.j, self.i, self.k)
    }
}

impl fmt::Display for ExponentTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{} z^{}", self.i, self.j, self.k)
    }
}

/// A solution `(α, β, γ)` of
/// `α+β+γ = p-1, α+5β = i, α+5γ = j, 3α = k` with entries in `[0, p-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultinomialSolution {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

/// The 25 exponent triples, laid out as the 5×5 matrix indexed by
/// [`GENERATOR_BASE`] × [`GENERATOR_BASE`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet25 {
    p: u64,
    rows: [[ExponentTriple; 5]; 5],
}

impl MonomialSet25 {
    /// The explicit list, cross-checked against the generator rule.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 5 {
            return Err(Error::UnsupportedCharacteristic {
                p,
                reason: "monomial set needs p > 5",
            });
        }
        let e = |a: u64, b: u64, c: u64, d: u64, f: u64, g: u64| {
            ExponentTriple::new(a * p - b, c * p - d, f * p - g)
        };
        let rows = [
            [
                e(3, 3, 1, 1, 1, 1),
                e(3, 1, 1, 3, 1, 1),
                e(3, 2, 1, 2, 1, 1),
                e(3, 2, 1, 1, 1, 2),
                e(3, 1, 1, 2, 1, 2),
            ],
            [
                e(1, 3, 3, 1, 1, 1),
                e(1, 1, 3, 3, 1, 1),
                e(1, 2, 3, 2, 1, 1),
                e(1, 2, 3, 1, 1, 2),
                e(1, 1, 3, 2, 1, 2),
            ],
            [
                e(2, 3, 2, 1, 1, 1),
                e(2, 1, 2, 3, 1, 1),
                e(2, 2, 2, 2, 1, 1),
                e(2, 2, 2, 1, 1, 2),
                e(2, 1, 2, 2, 1, 2),
            ],
            [
                e(2, 3, 1, 1, 2, 1),
                e(2, 1, 1, 3, 2, 1),
                e(2, 2, 1, 2, 2, 1),
                e(2, 2, 1, 1, 2, 2),
                e(2, 1, 1, 2, 2, 2),
            ],
            [
                e(1, 3, 2, 1, 2, 1),
                e(1, 1, 2, 3, 2, 1),
                e(1, 2, 2, 2, 2, 1),
                e(1, 2, 2, 1, 2, 2),
                e(1, 1, 2, 2, 2, 2),
            ],
        ];
        let set = Self { p, rows };
        let generated = Self::generated(p);
        assert_eq!(
            set.rows, generated,
            "explicit monomial list disagrees with B×B rule"
        );
        debug_assert!(set.iter().all(|(_, _, t)| t.degree() == 5 * (p - 1)));
        Ok(set)
    }

    /// Entries `(p·u − u')` for `u, u'` in the generator base.
    pub fn generated(p: u64) -> [[ExponentTriple; 5]; 5] {
        let mut rows = [[ExponentTriple::new(0, 0, 0); 5]; 5];
        for (r, u) in GENERATOR_BASE.iter().enumerate() {
            for (c, v) in GENERATOR_BASE.iter().enumerate() {
                rows[r][c] = ExponentTriple::new(p * u[0] - v[0], p * u[1] - v[1], p * u[2] - v[2]);
            }
        }
        rows
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> &[[ExponentTriple; 5]; 5] {
        &self.rows
    }

    /// `(row, column, triple)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, ExponentTriple)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &t)| (r, c, t)))
    }

    pub fn len(&self) -> usize {
        25
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, triple: ExponentTriple) -> bool {
        self.iter().any(|(_, _, t)| t == triple)
    }
}

/// Solve the exponent system through its row-reduced form
/// `15γ = i + 4j − 5(p−1)`, `β = 4γ − j + (p−1)`, `α = (p−1) − β − γ`,
/// then re-check all four original equations.
pub fn solve_exponent_system(p: u64, triple: ExponentTriple) -> Option<MultinomialSolution> {
    let pm1 = p as i128 - 1;
    let (i, j, k) = (triple.i as i128, triple.j as i128, triple.k as i128);
    let rhs = i + 4 * j - 5 * pm1;
    if rhs.rem_euclid(15) != 0 {
        return None;
    }
    let gamma = rhs / 15;
    let beta = -j + pm1 + 4 * gamma;
    let alpha = pm1 - beta - gamma;
    let in_range = |v: i128| (0..=pm1).contains(&v);
    if !(in_range(alpha) && in_range(beta) && in_range(gamma)) {
        return None;
    }
    let consistent = alpha + beta + gamma == pm1
        && alpha + 5 * beta == i
        && alpha + 5 * gamma == j
        && 3 * alpha == k;
    consistent.then_some(MultinomialSolution {
        alpha: alpha as u64,
        beta: beta as u64,
        gamma: gamma as u64,
    })
}

/// Coefficient of `x^i y^j z^k` in `F^(p-1)`.
pub fn coefficient(params: &QuinticParams, triple: ExponentTriple) -> Result<FieldElement> {
    let p = params.p();
    let expected = 5 * (p - 1);
    if triple.degree() != expected {
        return Err(Error::DegreeMismatch {
            i: triple.i,
            j: triple.j,
            k: triple.k,
            expected,
        });
    }
    let Some(sol) = solve_exponent_system(p, triple) else {
        return Ok(FieldElement::ZERO);
    };
    let f = params.field();
    let multinomial = f.base().multinomial(sol.alpha, sol.beta, sol.gamma)?;
    let st = f.mul(f.pow(params.s(), sol.beta), f.pow(params.t(), sol.gamma));
    Ok(f.scale(st, multinomial))
}

/// The 25 coefficients arranged as a 5×5 matrix, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwReport {
    pub p: u64,
    pub monomials: MonomialSet25,
    pub matrix: [[FieldElement; 5]; 5],
    pub superspecial: bool,
}

impl HwReport {
    /// Monomials whose coefficient is nonzero, in row-major order.
    pub fn nonzero(&self) -> Vec<(ExponentTriple, FieldElement)> {
        self.monomials
            .iter()
            .filter(|&(r, c, _)| !self.matrix[r][c].is_zero())
            .map(|(r, c, t)| (t, self.matrix[r][c]))
            .collect()
    }
}

pub fn hasse_witt_matrix(params: &QuinticParams) -> Result<HwReport> {
    let p = params.p();
    let monomials = MonomialSet25::new(p)?;
    let mut matrix = [[FieldElement::ZERO; 5]; 5];
    for (r, c, triple) in monomials.iter() {
        matrix[r][c] = coefficient(params, triple)?;
    }
    let superspecial = matrix.iter().flatten().all(|v| v.is_zero());
    Ok(HwReport {
        p,
        monomials,
        matrix,
        superspecial,
    })
}

/// `p ≡ 2 (mod 3)` and `p ≡ 1, 4 (mod 5)`, i.e. `p mod 15 ∈ {11, 14}`.
pub fn superspecial_predicted(p: u64) -> bool {
    matches!(p % 15, 11 | 14)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(p: u64) -> QuinticParams {
        QuinticParams::unit(&GaloisField::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn solver_examples() {
        assert_eq!(
            solve_exponent_system(13, ExponentTriple::new(24, 24, 12)),
            Some(MultinomialSolution {
                alpha: 4,
                beta: 4,
                gamma: 4
            })
        );
        assert_eq!(
            solve_exponent_system(23, ExponentTriple::new(67, 22, 21)),
            Some(MultinomialSolution {
                alpha: 7,
                beta: 12,
                gamma: 3
            })
        );
        assert_eq!(
            solve_exponent_system(11, ExponentTriple::new(31, 10, 9)),
            None
        );
    }

    #[test]
    fn solver_rejects_non_solutions_of_full_system() {
        // reduced equations hold but 3α ≠ k
        let sol = solve_exponent_system(13, ExponentTriple::new(24, 24, 12)).unwrap();
        assert_eq!(sol.alpha * 3, 12);
        assert_eq!(
            solve_exponent_system(13, ExponentTriple::new(24, 24, 13)),
            None
        );
    }

    #[test]
    fn monomial_set_shape() {
        let set = MonomialSet25::new(7).unwrap();
        assert_eq!(set.iter().count(), 25);
        let mut uniq: Vec<_> = set.iter().map(|(_, _, t)| t).collect();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 25);
        assert_eq!(set.rows()[0][0], ExponentTriple::new(18, 6, 6));
        assert_eq!(set.rows()[4][4], ExponentTriple::new(6, 12, 12));
        assert!(MonomialSet25::new(5).is_err());
    }

    #[test]
    fn coefficient_examples() {
        // 12!/(4!)^3 = 34650 ≡ 5 (mod 13)
        assert_eq!(34650 % 13, 5);
        let c = coefficient(&unit(13), ExponentTriple::new(24, 24, 12)).unwrap();
        assert_eq!(c, GaloisField::prime(13).unwrap().from_u64(5));

        let p11 = unit(11);
        for (_, _, t) in MonomialSet25::new(11).unwrap().iter() {
            assert!(coefficient(&p11, t).unwrap().is_zero());
        }
        assert!(!coefficient(&unit(7), ExponentTriple::new(12, 12, 6))
            .unwrap()
            .is_zero());

        assert!(matches!(
            coefficient(&unit(7), ExponentTriple::new(1, 1, 1)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn verdict_examples() {
        assert!(hasse_witt_matrix(&unit(11)).unwrap().superspecial);
        assert!(!hasse_witt_matrix(&unit(7)).unwrap().superspecial);
        assert!(!hasse_witt_matrix(&unit(23)).unwrap().superspecial);
        assert!(superspecial_predicted(11));
        assert!(superspecial_predicted(29));
        assert!(!superspecial_predicted(13));
    }

    #[test]
    fn params_validation() {
        let f5 = GaloisField::prime(5).unwrap();
        assert!(matches!(
            QuinticParams::unit(&f5),
            Err(Error::UnsupportedCharacteristic { p: 5, .. })
        ));
        let f7 = GaloisField::prime(7).unwrap();
        assert!(matches!(
            QuinticParams::new(&f7, f7.zero(), f7.one()),
            Err(Error::Degenerate(_))
        ));
        let f49 = GaloisField::quadratic(7).unwrap();
        let alpha = f49.from_parts(0, 1).unwrap();
        assert!(QuinticParams::new(&f7, alpha, f7.one()).is_err());
        assert!(QuinticParams::new(&f49, alpha, f49.one()).is_ok());
    }

    #[test]
    fn at_most_one_solution_everywhere() {
        for p in (7..=199).filter(|&p| is_prime(p)) {
            for (_, _, t) in MonomialSet25::new(p).unwrap().iter() {
                // exhaustive count of S(i,j,k)
                let pm1 = p - 1;
                let count = (0..=pm1)
                    .filter(|&a| 3 * a == t.k)
                    .flat_map(|a| (0..=pm1 - a).map(move |b| (a, b, pm1 - a - b)))
                    .filter(|&(a, b, c)| a + 5 * b == t.i && a + 5 * c == t.j)
                    .count();
                assert!(count <= 1);
                assert_eq!(
                    count == 1,
                    solve_exponent_system(p, t).is_some(),
                    "p={p} {t}"
                );
            }
        }
    }

    #[test]
    fn z_exponent_vanishing() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [7u64, 11, 13, 17, 23, 29, 41] {
            let f = GaloisField::quadratic(p).unwrap();
            let params =
                QuinticParams::new(&f, f.random_nonzero(&mut rng), f.random_nonzero(&mut rng))
                    .unwrap();
            for (_, _, t) in MonomialSet25::new(p).unwrap().iter() {
                if t.k % 3 != 0 {
                    assert!(coefficient(&params, t).unwrap().is_zero());
                }
                if p % 3 == 2 && (t.k == p - 1 || t.k == 2 * p - 2) {
                    assert!(coefficient(&params, t).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn mirror_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [7u64, 13, 17, 19, 23, 31] {
            let f = GaloisField::quadratic(p).unwrap();
            let (s, t) = (f.random_nonzero(&mut rng), f.random_nonzero(&mut rng));
            let st = QuinticParams::new(&f, s, t).unwrap();
            let ts = QuinticParams::new(&f, t, s).unwrap();
            for (_, _, tr) in MonomialSet25::new(p).unwrap().iter() {
                assert_eq!(
                    coefficient(&st, tr).unwrap(),
                    coefficient(&ts, tr.mirrored()).unwrap()
                );
            }
        }
    }

    #[test]
    fn witnesses_by_residue_class() {
        // p ≡ 1 (mod 3): (2p-2, 2p-2, p-1) with (p-1)/3 thrice
        let r = hasse_witt_matrix(&unit(13)).unwrap();
        assert!(r
            .nonzero()
            .iter()
            .any(|(t, _)| *t == ExponentTriple::new(24, 24, 12)));
        // p ≡ 2 (mod 3), p ≡ 3 (mod 5): (3p-2, p-1, p-2)
        let r = hasse_witt_matrix(&unit(23)).unwrap();
        assert!(r
            .nonzero()
            .iter()
            .any(|(t, _)| *t == ExponentTriple::new(67, 22, 21)));
    }

    #[test]
    fn witness_when_p_is_2_mod_3_and_2_mod_5() {
        // p ≡ 17 (mod 30): (3p-1, p-2, p-2) with ((p-2)/3, (8p-1)/15, (2p-4)/15)
        for p in [17u64, 47, 107, 137, 167, 197] {
            let t = ExponentTriple::new(3 * p - 1, p - 2, p - 2);
            let sol = solve_exponent_system(p, t).unwrap();
            assert_eq!(
                sol,
                MultinomialSolution {
                    alpha: (p - 2) / 3,
                    beta: (8 * p - 1) / 15,
                    gamma: (2 * p - 4) / 15
                }
            );
            let r = hasse_witt_matrix(&unit(p)).unwrap();
            assert!(!r.superspecial);
            assert!(r.nonzero().iter().any(|(w, _)| *w == t));
            // the mirror of the p ≡ 3 (mod 5) witness does not appear here
            assert!(
                solve_exponent_system(p, ExponentTriple::new(p - 1, 3 * p - 2, p - 2)).is_none()
            );
        }
    }
}
