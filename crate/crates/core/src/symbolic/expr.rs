use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{Monomial, MultiPoly, RatFunc};
use crate::exact_linalg::Rational;

/// Operator tree for structured output of symbolic results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Const { value: String },
    Var { name: String },
    Add { args: Vec<Expr> },
    Mul { args: Vec<Expr> },
    Pow { base: Box<Expr>, exp: u32 },
    Div { num: Box<Expr>, den: Box<Expr> },
}

/// Variable names for printing polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyRing {
    names: Vec<String>,
}

impl PolyRing {
    pub fn new(names: Vec<String>) -> Self {
        Self { names }
    }

    /// Prints variable `i` as `x{i}`.
    pub fn anonymous() -> Self {
        Self::default()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> String {
        self.names.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        m.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| match e {
                1 => self.name(i),
                _ => format!("{}^{e}", self.name(i)),
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Terms in descending graded-lex order, e.g. `a^2*b - 3/2*k + 1`.
    pub fn format_poly(&self, p: &MultiPoly) -> String {
        if p.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().rev().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                out.push_str(&format!("{mag}*{}", self.format_monomial(m)));
            }
        }
        out
    }

    pub fn format_ratfunc(&self, f: &RatFunc) -> String {
        let wrap = |p: &MultiPoly| {
            let s = self.format_poly(p);
            if p.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if f.denom().is_one() {
            self.format_poly(f.numer())
        } else {
            format!("{}/{}", wrap(f.numer()), wrap(f.denom()))
        }
    }

    fn monomial_expr(&self, m: &Monomial, c: &Rational) -> Expr {
        let mut args = Vec::new();
        if !c.is_one() || m.is_one() {
            args.push(Expr::Const { value: c.to_string() });
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            let var = Expr::Var { name: self.name(i) };
            match e {
                0 => {}
                1 => args.push(var),
                _ => args.push(Expr::Pow {
                    base: Box::new(var),
                    exp: e,
                }),
            }
        }
        if args.len() == 1 {
            args.pop().unwrap()
        } else {
            Expr::Mul { args }
        }
    }

    pub fn poly_expr(&self, p: &MultiPoly) -> Expr {
        let mut args: Vec<Expr> = p.terms().rev().map(|(m, c)| self.monomial_expr(m, c)).collect();
        match args.len() {
            0 => Expr::Const { value: "0".into() },
            1 => args.pop().unwrap(),
            _ => Expr::Add { args },
        }
    }

    pub fn ratfunc_expr(&self, f: &RatFunc) -> Expr {
        if f.denom().is_one() {
            self.poly_expr(f.numer())
        } else {
            Expr::Div {
                num: Box::new(self.poly_expr(f.numer())),
                den: Box::new(self.poly_expr(f.denom())),
            }
        }
    }
}

impl Expr {
    /// Evaluates the tree with the given variable lookup.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Rational>) -> Option<Rational> {
        use num_traits::Zero;
        match self {
            Expr::Const { value } => crate::exact_linalg::parse_rational(value).ok(),
            Expr::Var { name } => lookup(name),
            Expr::Add { args } => args
                .iter()
                .try_fold(Rational::zero(), |acc, a| Some(acc + a.eval(lookup)?)),
            Expr::Mul { args } => args
                .iter()
                .try_fold(Rational::one(), |acc, a| Some(acc * a.eval(lookup)?)),
            Expr::Pow { base, exp } => {
                let b = base.eval(lookup)?;
                Some((0..*exp).fold(Rational::one(), |acc, _| acc * &b))
            }
            Expr::Div { num, den } => {
                let d = den.eval(lookup)?;
                if d.is_zero() {
                    None
                } else {
                    Some(num.eval(lookup)? / d)
                }
            }
        }
    }
}
