use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{gcd, MultiPoly};
use super::SymbolicError;
use crate::exact_linalg::{Field, Rational};

/// Quotient of polynomials in canonical form: numerator and denominator
/// coprime, denominator with leading coefficient one (graded-lex), zero is
/// `0/1`. Two rational functions are equal iff their canonical forms match.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, SymbolicError> {
        ratfunc_normalize(num, den)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(i))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    /// Value at a rational point, `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn recip(&self) -> Result<Self, SymbolicError> {
        ratfunc_normalize(self.den.clone(), self.num.clone())
    }

    /// Moves the leading coefficient of the denominator into the numerator.
    fn fix_scale(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = Rational::one() / lc;
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

/// Reduces `num/den` by their GCD and fixes the scale of the denominator.
pub fn ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> Result<RatFunc, SymbolicError> {
    if den.is_zero() {
        return Err(SymbolicError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RatFunc::zero());
    }
    let g = gcd(&num, &den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (
            num.div_exact(&g).expect("gcd divides numerator"),
            den.div_exact(&g).expect("gcd divides denominator"),
        )
    };
    Ok(RatFunc::fix_scale(num, den))
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            // already coprime to both denominators
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::fix_scale(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d2) + &(&rhs.num * &d1);
        if t.is_zero() {
            return RatFunc::zero();
        }
        // t is coprime to d1·d2, so only g can share a factor with it
        let h = gcd(&t, &g);
        let num = t.div_exact(&h).expect("gcd divides");
        let g_rest = g.div_exact(&h).expect("gcd divides");
        let den = &(&d1 * &d2) * &g_rest;
        RatFunc::fix_scale(num, den)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross cancellation keeps the product reduced
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let div = |p: &MultiPoly, g: &MultiPoly| p.div_exact(g).expect("gcd divides");
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        RatFunc::fix_scale(num, den)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for RatFunc {
    type Output = RatFunc;

    /// # Panics
    ///
    /// On division by the zero rational function.
    fn div(self, rhs: RatFunc) -> RatFunc {
        self * rhs.recip().expect("division by zero rational function")
    }
}

impl Field for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::PolyRing::anonymous().format_ratfunc(self))
    }
}
