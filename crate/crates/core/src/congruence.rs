//! Residue-class predictions for maximality of `C_{p,a,b,c}` over `F_{p^2}`.
//!
//! With `n = ab / gcd(a, b, c)` the curve is maximal when `p ≡ −1 (mod n)`
//! (case 1), and, for coprime `a, b`, when `p ≡ d − 1 (mod n)` where `d` is
//! the CRT residue `d ≡ 2 (mod a)`, `d ≡ 0 (mod b)` in `[0, ab)` (case 2).

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::criterion::superspecial_predicted;
use crate::field::is_prime;
use crate::pointcount::{check_relation, genus};
use crate::{Error, Result};

/// Parameter triples of the maximal-curve table, in table order.
pub const TABLE2_TRIPLES: [(u64, u64, u64); 14] = [
    (8, 2, 3),
    (10, 2, 4),
    (5, 3, 1),
    (14, 2, 6),
    (12, 2, 5),
    (7, 3, 2),
    (9, 3, 3),
    (16, 2, 7),
    (18, 2, 8),
    (6, 4, 1),
    (20, 2, 9),
    (22, 2, 10),
    (11, 3, 4),
    (8, 4, 2),
];

/// `ab / gcd(a, b, c)`.
pub fn modulus_n(a: u64, b: u64, c: u64) -> u64 {
    a * b / a.gcd(&b).gcd(&c)
}

/// The unique `d ∈ [0, ab)` with `d ≡ 2 (mod a)` and `d ≡ 0 (mod b)`, found
/// by search; `None` unless `gcd(a, b) = 1`.
pub fn crt_residue(a: u64, b: u64) -> Option<u64> {
    if a.gcd(&b) != 1 {
        return None;
    }
    (0..a * b).find(|d| d % a == 2 % a && d % b == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchedCase {
    Case1,
    Case2,
    None,
}

/// Whether case 2 fired; it is only defined for coprime `a, b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTwo {
    Holds,
    Fails,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyReport {
    pub p: u64,
    pub abc: (u64, u64, u64),
    pub n: u64,
    pub d: Option<u64>,
    pub genus: u64,
    pub case1: bool,
    pub case2: CaseTwo,
    pub matched: MatchedCase,
    pub predicted_maximal: bool,
    /// Only for the quintic `(5, 3, 1)`.
    pub predicted_superspecial: Option<bool>,
}

pub fn classify(p: u64, a: u64, b: u64, c: u64) -> Result<ClassifyReport> {
    check_relation(a, b, c)?;
    if !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if (a * b).is_multiple_of(p) {
        return Err(Error::UnsupportedCharacteristic {
            p,
            reason: "p divides a·b",
        });
    }
    let n = modulus_n(a, b, c);
    let d = crt_residue(a, b);
    let case1 = p % n == n - 1;
    let case2 = match d {
        None => CaseTwo::Inapplicable,
        // p ≡ d − 1 (mod n), written to avoid d = 0 underflow
        Some(d) if (p + 1) % n == d % n => CaseTwo::Holds,
        Some(_) => CaseTwo::Fails,
    };
    let matched = if case1 {
        MatchedCase::Case1
    } else if case2 == CaseTwo::Holds {
        MatchedCase::Case2
    } else {
        MatchedCase::None
    };
    Ok(ClassifyReport {
        p,
        abc: (a, b, c),
        n,
        d,
        genus: genus(a, b, c)?,
        case1,
        case2,
        matched,
        predicted_maximal: matched != MatchedCase::None,
        predicted_superspecial: ((a, b, c) == (5, 3, 1)).then(|| superspecial_predicted(p)),
    })
}

/// `(superspecial, maximal)` for the quintic; both are `p mod 15 ∈ {11, 14}`.
pub fn quintic_iff(p: u64) -> Result<(bool, bool)> {
    if p <= 5 || !is_prime(p) {
        return Err(Error::UnsupportedCharacteristic {
            p,
            reason: "the quintic needs a prime p > 5",
        });
    }
    let both = matches!(p % 15, 11 | 14);
    Ok((both, both))
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            while m.is_multiple_of(f) {
                m /= f;
            }
            phi -= phi / f;
        }
        f += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Natural density of primes in the given residue classes: `|R| / φ(N)`.
pub fn density(modulus: u64, residues: &[u64]) -> Result<Ratio<u64>> {
    if modulus == 0 {
        return Err(Error::Relation("modulus must be positive".into()));
    }
    let mut classes: Vec<u64> = residues.iter().map(|r| r % modulus).collect();
    classes.sort_unstable();
    classes.dedup();
    if let Some(r) = classes.iter().find(|r| r.gcd(&modulus) != 1) {
        return Err(Error::Relation(format!(
            "residue {r} is not coprime to {modulus}"
        )));
    }
    Ok(Ratio::new(classes.len() as u64, euler_phi(modulus)))
}

/// Bézout data `k b + ℓ c = 1` with `0 ≤ −ℓ < b`, and `d' = −ℓ a + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BezoutData {
    pub k: i64,
    pub l: i64,
    pub d: u64,
}

pub fn bezout_d(a: u64, b: u64, c: u64) -> Result<BezoutData> {
    check_relation(a, b, c)?;
    if a.gcd(&b) != 1 {
        return Err(Error::Hypothesis(format!("gcd(a, b) = {} ≠ 1", a.gcd(&b))));
    }
    if b.gcd(&c) != 1 {
        return Err(Error::Hypothesis(format!("gcd(b, c) = {} ≠ 1", b.gcd(&c))));
    }
    let (bi, ci) = (b as i64, c as i64);
    let l = (0..bi)
        .map(|m| -m)
        .find(|l| (1 - l * ci).rem_euclid(bi) == 0)
        .expect("c is invertible modulo b");
    let k = (1 - l * ci) / bi;
    let d = (-l * a as i64 + 2) as u64;
    debug_assert_eq!(k * bi + l * ci, 1);
    assert!(d % a == 2 % a && d.is_multiple_of(b) && d < a * b);
    assert_eq!(Some(d), crt_residue(a, b));
    Ok(BezoutData { k, l, d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableCase {
    One { n: u64 },
    Two { n: u64, d: u64 },
}

impl fmt::Display for TableCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableCase::One { n } => write!(f, "case (1) with n={n}"),
            TableCase::Two { n, d } => write!(f, "case (2) with (n,d) = ({n},{d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub genus: u64,
    /// Residue of `p` modulo `n`.
    pub residue: u64,
    pub n: u64,
    pub abc: (u64, u64, u64),
    pub case: TableCase,
}

impl Table2Row {
    pub fn congruence(&self) -> String {
        format!("p ≡ {} (mod {})", self.residue, self.n)
    }
}

impl fmt::Display for Table2Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.abc;
        write!(
            f,
            "{} | {} | ({a},{b},{c}) | {}",
            self.genus,
            self.congruence(),
            self.case
        )
    }
}

/// Rows of the maximal-parameter table: case 1 for every triple and case 2
/// wherever `gcd(a, b) = 1`.
pub fn table2_rows() -> Vec<Table2Row> {
    let mut rows = Vec::new();
    for &(a, b, c) in &TABLE2_TRIPLES {
        let g = genus(a, b, c).expect("table triples satisfy b + 2c = a");
        let n = modulus_n(a, b, c);
        rows.push(Table2Row {
            genus: g,
            residue: n - 1,
            n,
            abc: (a, b, c),
            case: TableCase::One { n },
        });
        if let Some(d) = crt_residue(a, b) {
            rows.push(Table2Row {
                genus: g,
                residue: (d + n - 1) % n,
                n,
                abc: (a, b, c),
                case: TableCase::Two { n, d },
            });
        }
    }
    rows
}
