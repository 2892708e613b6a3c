//! Exact arithmetic in cyclotomic fields `Q(ζ_L)`.
//!
//! An element is stored as a residue modulo the `L`-th cyclotomic polynomial
//! `Φ_L`, i.e. as `φ(L)` rational coefficients in the power basis
//! `1, ζ_L, …, ζ_L^{φ(L)-1}`. Every operation leaves the representation
//! reduced, so equality of two numbers of the same order is coefficient
//! equality. Numbers of different orders are lifted to the lcm order first.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("multiplicative order of zero is undefined")]
    ZeroOrder,
    #[error("cyclotomic order must be positive")]
    ZeroCyclotomicOrder,
    #[error("malformed scalar at column {column}: {message}")]
    Parse { column: usize, message: String },
}

thread_local! {
    static CYCLOTOMIC_POLYS: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients of `Φ_n`, lowest degree first. Monic of degree `φ(n)`.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = CYCLOTOMIC_POLYS.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d);
            num = exact_monic_div(&num, &den);
        }
    }
    let p = Rc::new(num);
    CYCLOTOMIC_POLYS.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

fn exact_monic_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (dd..=nd).rev() {
        let c = rem[k];
        quot[k - dd] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k - dd + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Reduce a polynomial (lowest degree first) modulo `Φ_order` in place and
/// truncate to length `φ(order)`.
fn reduce_mod_phi(poly: &mut Vec<BigRational>, order: u32) {
    let phi = cyclotomic_poly(order);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            for (i, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    poly[k - deg + i] -= &c * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
    }
    poly.resize(deg, BigRational::zero());
}

/// An exact element of `Q(ζ_order)`.
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero_of(order: u32) -> Self {
        assert!(order >= 1);
        CycNum {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycNum {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `ζ_order^k`, reduced.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        reduce_mod_phi(&mut poly, order);
        CycNum { order, coeffs: poly }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Returns the rational value if the number lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in `Q(ζ_target)`; `self.order` must divide `target`.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target % self.order == 0,
            "cannot lift order {} to {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        if self.order == 1 {
            let mut coeffs = vec![BigRational::zero(); euler_phi(target) as usize];
            coeffs[0] = self.coeffs[0].clone();
            return CycNum { order: target, coeffs };
        }
        let m = (target / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * m + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[k * m] = c.clone();
            }
        }
        reduce_mod_phi(&mut poly, target);
        CycNum {
            order: target,
            coeffs: poly,
        }
    }

    fn aligned<'a>(a: &'a CycNum, b: &'a CycNum) -> (std::borrow::Cow<'a, CycNum>, std::borrow::Cow<'a, CycNum>) {
        use std::borrow::Cow;
        if a.order == b.order {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else {
            let l = a.order.lcm(&b.order);
            let la = if a.order == l { Cow::Borrowed(a) } else { Cow::Owned(a.lift(l)) };
            let lb = if b.order == l { Cow::Borrowed(b) } else { Cow::Owned(b.lift(l)) };
            (la, lb)
        }
    }

    fn mul_ref(&self, other: &CycNum) -> CycNum {
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        let (a, b) = Self::aligned(self, other);
        let n = a.coeffs.len();
        if n == 1 {
            return CycNum {
                order: a.order,
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0]],
            };
        }
        let mut poly = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        reduce_mod_phi(&mut poly, a.order);
        CycNum {
            order: a.order,
            coeffs: poly,
        }
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> CycNum {
        if r.is_one() {
            return self.clone();
        }
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]/Φ_L`.
    pub fn inverse(&self) -> Result<CycNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNum::from_rational(r.recip()).lift(self.order));
        }
        let phi: Vec<BigRational> = cyclotomic_poly(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let a = trim(self.coeffs.clone());
        // Invariant: s * a ≡ r (mod Φ).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            debug_assert!(!r1.is_empty(), "Φ_L is irreducible");
        }
        let c = r1[0].recip();
        let mut inv: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        reduce_mod_phi(&mut inv, self.order);
        Ok(CycNum {
            order: self.order,
            coeffs: inv,
        })
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum, CycloError> {
        Ok(self * &other.inverse()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycNum, CycloError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one().lift(self.order);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Smallest `n ≥ 1` with `self^n = 1`, or `None` if `self` is not a root
    /// of unity. The roots of unity of `Q(ζ_L)` have order dividing `lcm(2, L)`.
    pub fn mult_order(&self) -> Result<Option<u64>, CycloError> {
        if self.is_zero() {
            return Err(CycloError::ZeroOrder);
        }
        let bound = (self.order as u64).lcm(&2);
        let mut divisors: Vec<u64> = (1..=bound).filter(|d| bound % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            if self.pow(d as i64)?.is_one() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// If `self = ζ_n^k` for some `k`, return the least such `k`.
    pub fn root_exponent(&self, n: u32) -> Option<u32> {
        let l = n.lcm(&self.order);
        let me = self.lift(l);
        (0..n).find(|&k| CycNum::root_of_unity(n, k as i64).lift(l) == me)
    }

    /// Serialise without whitespace (for `key=value` records).
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
            } else if spaced {
                out.push_str(if neg { " - " } else { " + " });
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            first = false;
            let zeta = match k {
                0 => None,
                1 => Some(format!("zeta({})", self.order)),
                _ => Some(format!("zeta({})^{}", self.order, k)),
            };
            match zeta {
                None => out.push_str(&mag.to_string()),
                Some(z) => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                        out.push('*');
                    }
                    out.push_str(&z);
                }
            }
        }
        if first {
            out.push('0');
        }
        out
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (trim(quot), rem)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycNum::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl Zero for CycNum {
    fn zero() -> Self {
        CycNum::zero_of(1)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
}

impl One for CycNum {
    fn one() -> Self {
        CycNum::from_int(1)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (a, b) = CycNum::aligned(self, rhs);
        CycNum {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        let (a, b) = CycNum::aligned(self, rhs);
        CycNum {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.mul_ref(rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if rhs.order == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
        } else if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        if rhs.order == 1 {
            self.coeffs[0] -= &rhs.coeffs[0];
        } else if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = self.mul_ref(rhs);
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

// ---------------------------------------------------------------------------
// Scalar grammar: sums of products of rationals and `zeta(L)^k` factors.
//
//   scalar := ws sign? term (ws ('+' | '-') ws term)* ws
//   term   := factor (ws '*' ws factor)*
//   factor := int ('/' int)? | 'zeta(' int ')' ('^' '-'? int)?

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, CycloError> {
        Err(CycloError::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, CycloError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn factor(&mut self) -> Result<CycNum, CycloError> {
        self.ws();
        if self.src[self.pos..].starts_with(b"zeta(") {
            self.pos += 5;
            self.ws();
            let n = self.uint()?;
            self.ws();
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            let n = match n.to_u32() {
                Some(n) if n >= 1 => n,
                _ => return self.err("zeta order must be a positive integer"),
            };
            let mut k = BigInt::one();
            if self.eat(b'^') {
                let neg = self.eat(b'-');
                k = self.uint()?;
                if neg {
                    k = -k;
                }
            }
            let k = k.mod_floor(&BigInt::from(n)).to_i64().unwrap();
            Ok(CycNum::root_of_unity(n, k))
        } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.uint()?;
            let den = if self.eat(b'/') {
                let d = self.uint()?;
                if d.is_zero() {
                    return self.err("zero denominator");
                }
                d
            } else {
                BigInt::one()
            };
            Ok(CycNum::from_rational(BigRational::new(num, den)))
        } else {
            self.err("expected a rational or zeta(L)")
        }
    }

    fn term(&mut self) -> Result<CycNum, CycloError> {
        let mut acc = self.factor()?;
        loop {
            self.ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar(&mut self) -> Result<CycNum, CycloError> {
        self.ws();
        let mut neg = self.eat(b'-');
        let mut acc = CycNum::zero();
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            self.ws();
            if self.pos == self.src.len() {
                return Ok(acc);
            }
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                return self.err("expected '+', '-' or end of scalar");
            }
        }
    }
}

impl FromStr for CycNum {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ScalarParser {
            src: s.as_bytes(),
            pos: 0,
        };
        p.scalar()
    }
}
