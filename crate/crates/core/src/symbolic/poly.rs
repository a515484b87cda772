//! Sparse multivariate polynomials over ℚ with dense exponent vectors and a
//! recursive (primitive PRS) GCD.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact_linalg::Rational;

/// Exponent vector with trailing zeros trimmed, ordered graded
/// lexicographically (total degree first, then variable 0 most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new((0..len).map(|i| self.exponent(i) + other.exponent(i)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        Some(Self::new(out))
    }

    fn without(&self, var: usize) -> Self {
        let mut v = self.0.clone();
        if var < v.len() {
            v[var] = 0;
        }
        Self::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            (0..len)
                .map(|i| self.exponent(i).cmp(&other.exponent(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in variables `x₀, x₁, …`; names live in a [`PolyRing`](super::PolyRing).
/// No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::default(), c);
        }
        Self { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Greatest term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (k.mul(m), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Highest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.exponents().len().checked_sub(1))
            .max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficients with respect to `x_var`, lowest power first; none of them
    /// contains `x_var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::default(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = MultiPoly::default();
        for (e, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(var, e as u32);
            for (m, x) in &c.terms {
                out.add_term(m.mul(&shift), x.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc + t
        })
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::default();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scaled so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&(Rational::one() / c)),
            _ => self.clone(),
        }
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn degree_of(coeffs: &[MultiPoly]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

fn trimmed(mut coeffs: Vec<MultiPoly>) -> Vec<MultiPoly> {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Pseudo-remainder of `a` by `b` as polynomials in one variable whose
/// coefficients are polynomials in the others.
fn pseudo_remainder(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = degree_of(b).expect("nonzero divisor");
    let lcb = &b[db];
    let mut r = trimmed(a.to_vec());
    while let Some(dr) = degree_of(&r) {
        if dr < db {
            break;
        }
        let lcr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MultiPoly> = r.iter().map(|c| c * lcb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bc * &lcr);
        }
        r = trimmed(next);
    }
    r
}

fn content(coeffs: &[MultiPoly]) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part(coeffs: &[MultiPoly]) -> Vec<MultiPoly> {
    let c = content(coeffs);
    coeffs
        .iter()
        .map(|x| x.div_exact(&c).expect("content divides every coefficient"))
        .collect()
}

/// Greatest common divisor over ℚ, normalized to leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one();
    }
    if f == g {
        return f.monic();
    }
    let var = f.max_var().max(g.max_var()).expect("non-constant");
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    if fc.len() == 1 {
        return gcd(f, &content(&gc));
    }
    if gc.len() == 1 {
        return gcd(&content(&fc), g);
    }
    let cont = gcd(&content(&fc), &content(&gc));
    let (mut a, mut b) = (primitive_part(&fc), primitive_part(&gc));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let h = loop {
        let r = pseudo_remainder(&a, &b);
        match degree_of(&r) {
            None => break b,
            Some(0) => break vec![MultiPoly::one()],
            Some(_) => {
                a = b;
                b = primitive_part(&r);
            }
        }
    };
    let h = MultiPoly::from_coeffs_in(var, &primitive_part(&h));
    (&cont * &h).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn c(v: i64) -> MultiPoly {
        MultiPoly::from_int(v)
    }

    #[test]
    fn graded_lex_order() {
        // a² > a b > b² > a > b > 1
        let mut ms = vec![
            Monomial::new(vec![0, 1]),
            Monomial::new(vec![1, 1]),
            Monomial::default(),
            Monomial::new(vec![2]),
            Monomial::new(vec![0, 2]),
            Monomial::new(vec![1]),
        ];
        ms.sort();
        assert_eq!(
            ms,
            vec![
                Monomial::default(),
                Monomial::new(vec![0, 1]),
                Monomial::new(vec![1]),
                Monomial::new(vec![0, 2]),
                Monomial::new(vec![1, 1]),
                Monomial::new(vec![2]),
            ]
        );
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::new(vec![1]));
    }

    #[test]
    fn arithmetic_and_division() {
        let (a, b) = (x(0), x(1));
        let sum = &a + &b;
        let diff = &a - &b;
        let prod = &sum * &diff;
        assert_eq!(prod, &(&a * &a) - &(&b * &b));
        assert_eq!(prod.div_exact(&diff).unwrap(), sum);
        assert!(prod.div_exact(&(&a + &c(1))).is_none());
        assert_eq!((&sum - &sum), MultiPoly::zero());
        assert_eq!(sum.pow(3).total_degree(), 3);
        assert_eq!(sum.pow(2).len(), 3);
    }

    #[test]
    fn coefficient_split_round_trips() {
        let p = &(&x(0) * &x(2).pow(2)) + &(&x(1) * &x(2));
        let p = &p + &c(5);
        let cs = p.coeffs_in(2);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1], x(1));
        assert_eq!(MultiPoly::from_coeffs_in(2, &cs), p);
    }

    #[test]
    fn gcd_examples() {
        let (a, b, k) = (x(0), x(1), x(2));
        let s = &a + &(&b * &k);
        let f = &(&a * &b) * &s;
        let g = s.pow(3);
        assert_eq!(gcd(&f, &g), s);
        assert_eq!(gcd(&(&a - &b), &(&a + &b)), MultiPoly::one());
        let u = &(&a * &a) - &(&b * &b);
        assert_eq!(gcd(&u, &(&a - &b).scale(&Rational::new(3.into(), 2.into()))), &a - &b);
        assert_eq!(gcd(&MultiPoly::zero(), &f.scale(&Rational::from_integer(4.into()))), f.monic());
        assert_eq!(gcd(&c(6), &a), MultiPoly::one());
        // shared factor in a lower variable only
        let p = &(&a + &c(1)) * &(&k + &b);
        let q = &(&a + &c(1)) * &(&k - &b);
        assert_eq!(gcd(&p, &q), &a + &c(1));
    }
}
