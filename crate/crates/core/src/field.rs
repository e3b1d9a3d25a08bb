//! Arithmetic in `F_p` and `F_{p^2}`.
//!
//! `F_{p^2}` is realised as `F_p[α]/(α² − r)` where `r` is the smallest
//! positive quadratic nonresidue modulo `p`, so every representation (and
//! every enumeration order) is reproducible bit for bit.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use rand::Rng;

use crate::{Error, Result};

/// Largest modulus for which factorial tables are materialised.
pub const MAX_TABLE_MODULUS: u64 = 1 << 26;

/// Multiplication modulo `p`; every product in the crate goes through here.
#[inline(always)]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

#[inline(always)]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline(always)]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    primal_check::miller_rabin(n)
}

/// Smallest positive `r` with `r^((p-1)/2) ≡ -1 (mod p)`.
pub fn find_nonresidue(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let half = (p - 1) / 2;
    (2..p)
        .find(|&r| pow_mod(r, half, p) == p - 1)
        .ok_or(Error::NotOddPrime(p))
}

#[derive(Debug)]
struct FactorialTables {
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

/// The prime field `F_p` together with lazily built factorial tables
/// `0!, …, (p-1)!` and their inverses.
#[derive(Debug)]
pub struct PrimeField {
    p: u64,
    tables: OnceLock<FactorialTables>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Self {
            p,
            tables: OnceLock::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    pub fn reduce_signed(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        sub_mod(0, a, self.p)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Inverse by the extended Euclidean algorithm; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let egcd = (a as i128).extended_gcd(&(self.p as i128));
        debug_assert_eq!(egcd.gcd, 1);
        Some(egcd.x.rem_euclid(self.p as i128) as u64)
    }

    fn tables(&self) -> Result<&FactorialTables> {
        if self.p > MAX_TABLE_MODULUS {
            return Err(Error::Guard {
                what: "factorial table modulus",
                value: self.p,
                limit: MAX_TABLE_MODULUS,
            });
        }
        Ok(self.tables.get_or_init(|| {
            let n = self.p as usize;
            let mut fact = vec![1u64; n];
            for t in 1..n {
                fact[t] = self.mul(fact[t - 1], t as u64);
            }
            let mut inv_fact = vec![1u64; n];
            inv_fact[n - 1] = self.inv(fact[n - 1]).expect("(p-1)! is a unit");
            for t in (1..n).rev() {
                inv_fact[t - 1] = self.mul(inv_fact[t], t as u64);
            }
            FactorialTables { fact, inv_fact }
        }))
    }

    /// `t! mod p` for `0 <= t < p`.
    pub fn factorial(&self, t: u64) -> Result<u64> {
        self.check_table_index(t)?;
        Ok(self.tables()?.fact[t as usize])
    }

    pub fn inv_factorial(&self, t: u64) -> Result<u64> {
        self.check_table_index(t)?;
        Ok(self.tables()?.inv_fact[t as usize])
    }

    fn check_table_index(&self, t: u64) -> Result<()> {
        if t >= self.p {
            return Err(Error::Relation(format!(
                "factorial argument {t} must be below p = {}",
                self.p
            )));
        }
        Ok(())
    }

    /// `(p-1)! / (α! β! γ!) mod p` for `α + β + γ = p - 1`. Never zero.
    pub fn multinomial(&self, alpha: u64, beta: u64, gamma: u64) -> Result<u64> {
        let total = alpha.checked_add(beta).and_then(|s| s.checked_add(gamma));
        if total != Some(self.p - 1) {
            return Err(Error::Relation(format!(
                "multinomial arguments ({alpha}, {beta}, {gamma}) must sum to p - 1 = {}",
                self.p - 1
            )));
        }
        let t = self.tables()?;
        let m = self.mul(t.fact[self.p as usize - 1], t.inv_fact[alpha as usize]);
        let m = self.mul(m, t.inv_fact[beta as usize]);
        Ok(self.mul(m, t.inv_fact[gamma as usize]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    /// `q = p`
    One,
    /// `q = p^2`
    Two,
}

/// An element `re + im·α` of `F_q`; base-field elements have `im = 0`.
///
/// Components are always canonical (in `[0, p)`), so derived equality is
/// field equality. Elements carry no reference to their field: all
/// arithmetic goes through a [`GaloisField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement {
    re: u64,
    im: u64,
}

impl FieldElement {
    pub const ZERO: Self = Self { re: 0, im: 0 };

    pub fn re(self) -> u64 {
        self.re
    }

    pub fn im(self) -> u64 {
        self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_base(self) -> bool {
        self.im == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

/// `F_p` or `F_{p^2}`. Cheap to clone; the prime field (and its factorial
/// tables) is shared.
#[derive(Debug, Clone)]
pub struct GaloisField {
    base: Arc<PrimeField>,
    nr: u64,
    degree: Degree,
}

impl GaloisField {
    pub fn new(p: u64, degree: Degree) -> Result<Self> {
        let base = Arc::new(PrimeField::new(p)?);
        let nr = find_nonresidue(p)?;
        Ok(Self { base, nr, degree })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, Degree::One)
    }

    pub fn quadratic(p: u64) -> Result<Self> {
        Self::new(p, Degree::Two)
    }

    /// The same characteristic with a different degree, sharing tables.
    pub fn with_degree(&self, degree: Degree) -> Self {
        Self {
            base: Arc::clone(&self.base),
            nr: self.nr,
            degree,
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn characteristic(&self) -> u64 {
        self.base.p
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// The nonresidue `r` with `α² = r`.
    pub fn nonresidue(&self) -> u64 {
        self.nr
    }

    pub fn order(&self) -> u64 {
        let p = self.base.p;
        match self.degree {
            Degree::One => p,
            Degree::Two => p * p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { re: 1, im: 0 }
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        FieldElement {
            re: self.base.reduce(v),
            im: 0,
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        FieldElement {
            re: self.base.reduce_signed(v),
            im: 0,
        }
    }

    /// Build `re + im·α` from already-canonical components.
    pub fn from_parts(&self, re: u64, im: u64) -> Result<FieldElement> {
        let p = self.base.p;
        if re >= p || im >= p {
            return Err(Error::InvalidElement(format!(
                "components ({re}, {im}) not reduced modulo {p}"
            )));
        }
        if im != 0 && self.degree == Degree::One {
            return Err(Error::InvalidElement(format!(
                "{re}+{im}*i does not lie in F_{p}"
            )));
        }
        Ok(FieldElement { re, im })
    }

    /// Parse `u`, `u+v*i`, `u-v*i`, `v*i` or `i`; integers may be negative and
    /// are reduced modulo `p`.
    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        let bad = || Error::InvalidElement(format!("cannot parse {text:?} as u or u+v*i"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let int = |t: &str| -> Result<i64> { t.parse::<i64>().map_err(|_| bad()) };
        let imag = |t: &str| -> Result<i64> {
            let body = t.strip_suffix('i').ok_or_else(bad)?;
            match body {
                "" | "+" => Ok(1),
                "-" => Ok(-1),
                _ => int(body.strip_suffix('*').ok_or_else(bad)?),
            }
        };
        let (re, im) = if s.ends_with('i') {
            // split at the last sign that is not the leading one
            match s[1..].rfind(['+', '-']).map(|k| k + 1) {
                Some(k) => (int(&s[..k])?, imag(&s[k..])?),
                None => (0, imag(&s)?),
            }
        } else {
            (int(&s)?, 0)
        };
        let p = self.base.p as i64;
        self.from_parts(re.rem_euclid(p) as u64, im.rem_euclid(p) as u64)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.base.p;
        FieldElement {
            re: add_mod(x.re, y.re, p),
            im: add_mod(x.im, y.im, p),
        }
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.base.p;
        FieldElement {
            re: sub_mod(x.re, y.re, p),
            im: sub_mod(x.im, y.im, p),
        }
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, x)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.base.p;
        if x.im == 0 && y.im == 0 {
            return FieldElement {
                re: mul_mod(x.re, y.re, p),
                im: 0,
            };
        }
        // (a + bα)(c + dα) = (ac + r·bd) + (ad + bc)α
        let ac = mul_mod(x.re, y.re, p);
        let bd = mul_mod(x.im, y.im, p);
        let ad = mul_mod(x.re, y.im, p);
        let bc = mul_mod(x.im, y.re, p);
        FieldElement {
            re: add_mod(ac, mul_mod(self.nr, bd, p), p),
            im: add_mod(ad, bc, p),
        }
    }

    pub fn scale(&self, x: FieldElement, k: u64) -> FieldElement {
        self.mul(x, self.from_u64(k))
    }

    /// `x^e`, with `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for signed `e`; `None` when `x = 0` and `e < 0`.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Option<FieldElement> {
        if e >= 0 {
            Some(self.pow(x, e as u64))
        } else {
            self.inv(x).map(|xi| self.pow(xi, e.unsigned_abs()))
        }
    }

    /// `x^p`. On `F_{p^2}` this is conjugation `α ↦ -α`.
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        FieldElement {
            re: x.re,
            im: self.base.neg(x.im),
        }
    }

    /// `x^(p+1) = re² − r·im²`, an element of `F_p`.
    pub fn norm(&self, x: FieldElement) -> u64 {
        let b = &self.base;
        b.sub(b.mul(x.re, x.re), b.mul(self.nr, b.mul(x.im, x.im)))
    }

    /// `x + x^p = 2·re`.
    pub fn trace(&self, x: FieldElement) -> u64 {
        self.base.add(x.re, x.re)
    }

    pub fn inv(&self, x: FieldElement) -> Option<FieldElement> {
        if x.im == 0 {
            return self.base.inv(x.re).map(|re| FieldElement { re, im: 0 });
        }
        let n_inv = self.base.inv(self.norm(x))?;
        let conj = self.frobenius(x);
        Some(FieldElement {
            re: self.base.mul(conj.re, n_inv),
            im: self.base.mul(conj.im, n_inv),
        })
    }

    /// Number of `z ∈ F_q` with `z^b = w`.
    ///
    /// For `w ≠ 0` this is `m = gcd(b, q-1)` when `w^((q-1)/m) = 1` and zero
    /// otherwise; for `w = 0` it is 1.
    pub fn nth_root_count(&self, w: FieldElement, b: u64) -> Result<u64> {
        let p = self.base.p;
        if b == 0 || b.is_multiple_of(p) {
            return Err(Error::Relation(format!(
                "root degree {b} must be positive and prime to p = {p}"
            )));
        }
        if w.is_zero() {
            return Ok(1);
        }
        let q1 = self.order() - 1;
        let m = b.gcd(&q1);
        Ok(if self.pow(w, q1 / m) == self.one() {
            m
        } else {
            0
        })
    }

    /// The element with enumeration index `k` in `[0, q)`: `k = re + p·im`.
    pub fn element(&self, k: u64) -> FieldElement {
        let p = self.base.p;
        debug_assert!(k < self.order());
        FieldElement {
            re: k % p,
            im: k / p,
        }
    }

    pub fn index_of(&self, x: FieldElement) -> u64 {
        x.re + self.base.p * x.im
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |k| self.element(k))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.gen_range(0..self.order()))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.gen_range(1..self.order()))
    }
}
