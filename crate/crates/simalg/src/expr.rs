//! Axiom expression trees.
//!
//! Axioms are data, not code: each side of an axiom is a small tree over the
//! symbols of an [`OperationTable`] so the
//! same catalog drives auditing, collapse sweeps, and report rendering.
//! `Exact*` nodes denote classical pointwise operations (used where an axiom
//! mixes the structure's approximate operations with plain linear algebra,
//! e.g. bracket bilinearity).

use crate::error::{Error, Result};
use crate::point::Point;
use crate::structures::OperationTable;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Carrier variable.
    Var(usize),
    /// Scalar variable (drawn from the scalar box).
    ScalarVar(usize),
    /// The table's approximate additive identity.
    Zero,
    /// The table's approximate multiplicative identity.
    One,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Approximate additive inverse.
    Neg(Box<Expr>),
    /// Approximate multiplicative inverse (partial; see exclusion sets).
    Inv(Box<Expr>),
    /// Scalar action: first operand must evaluate to a scalar.
    ScalarAct(Box<Expr>, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    /// Classical pointwise sum.
    ExactAdd(Box<Expr>, Box<Expr>),
    /// Classical scalar multiple: first operand must evaluate to a scalar.
    ExactScale(Box<Expr>, Box<Expr>),
    /// Classical pointwise negation.
    ExactNeg(Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn svar(i: usize) -> Expr {
        Expr::ScalarVar(i)
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn inv(self) -> Expr {
        Expr::Inv(Box::new(self))
    }

    pub fn act_on(self, carrier: Expr) -> Expr {
        Expr::ScalarAct(Box::new(self), Box::new(carrier))
    }

    pub fn bracket(self, rhs: Expr) -> Expr {
        Expr::Bracket(Box::new(self), Box::new(rhs))
    }

    pub fn exact_add(self, rhs: Expr) -> Expr {
        Expr::ExactAdd(Box::new(self), Box::new(rhs))
    }

    pub fn exact_scale(self, carrier: Expr) -> Expr {
        Expr::ExactScale(Box::new(self), Box::new(carrier))
    }

    pub fn exact_neg(self) -> Expr {
        Expr::ExactNeg(Box::new(self))
    }

    /// Table symbols this expression references, for validation.
    pub fn symbols(&self, out: &mut Vec<&'static str>) {
        match self {
            Expr::Var(_) | Expr::ScalarVar(_) => {}
            Expr::Zero => out.push("zero"),
            Expr::One => out.push("one"),
            Expr::Add(l, r) => {
                out.push("add");
                l.symbols(out);
                r.symbols(out);
            }
            Expr::Mul(l, r) => {
                out.push("mul");
                l.symbols(out);
                r.symbols(out);
            }
            Expr::Neg(e) => {
                out.push("neg");
                e.symbols(out);
            }
            Expr::Inv(e) => {
                out.push("inv");
                e.symbols(out);
            }
            Expr::ScalarAct(s, e) => {
                out.push("scalar_action");
                s.symbols(out);
                e.symbols(out);
            }
            Expr::Bracket(l, r) => {
                out.push("bracket");
                l.symbols(out);
                r.symbols(out);
            }
            Expr::ExactAdd(l, r) => {
                l.symbols(out);
                r.symbols(out);
            }
            Expr::ExactScale(s, e) => {
                s.symbols(out);
                e.symbols(out);
            }
            Expr::ExactNeg(e) => e.symbols(out),
        }
    }

    /// Whether the expression references the partial inverse.
    pub fn uses_inv(&self) -> bool {
        let mut syms = Vec::new();
        self.symbols(&mut syms);
        syms.contains(&"inv")
    }

    /// Evaluate against carrier variables, scalar variables, and a table.
    pub fn eval(&self, vars: &[Point], scalars: &[f64], ops: &OperationTable) -> Result<Point> {
        let missing = |sym: &str| Error::Config(format!("operation table is missing `{sym}`"));
        match self {
            Expr::Var(i) => vars
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Input(format!("variable {i} unbound"))),
            Expr::ScalarVar(i) => scalars
                .get(*i)
                .map(|s| Point::Scalar(*s))
                .ok_or_else(|| Error::Input(format!("scalar variable {i} unbound"))),
            Expr::Zero => ops.zero.clone().ok_or_else(|| missing("zero")),
            Expr::One => ops.one.clone().ok_or_else(|| missing("one")),
            Expr::Add(l, r) => {
                let f = ops.add.as_ref().ok_or_else(|| missing("add"))?;
                f(&l.eval(vars, scalars, ops)?, &r.eval(vars, scalars, ops)?)
            }
            Expr::Mul(l, r) => {
                let f = ops.mul.as_ref().ok_or_else(|| missing("mul"))?;
                f(&l.eval(vars, scalars, ops)?, &r.eval(vars, scalars, ops)?)
            }
            Expr::Neg(e) => {
                let f = ops.neg.as_ref().ok_or_else(|| missing("neg"))?;
                f(&e.eval(vars, scalars, ops)?)
            }
            Expr::Inv(e) => {
                let f = ops.inv.as_ref().ok_or_else(|| missing("inv"))?;
                f(&e.eval(vars, scalars, ops)?)
            }
            Expr::ScalarAct(s, e) => {
                let f = ops.scalar_action.as_ref().ok_or_else(|| missing("scalar_action"))?;
                f(&s.eval(vars, scalars, ops)?, &e.eval(vars, scalars, ops)?)
            }
            Expr::Bracket(l, r) => {
                let f = ops.bracket.as_ref().ok_or_else(|| missing("bracket"))?;
                f(&l.eval(vars, scalars, ops)?, &r.eval(vars, scalars, ops)?)
            }
            Expr::ExactAdd(l, r) => {
                let a = l.eval(vars, scalars, ops)?;
                let b = r.eval(vars, scalars, ops)?;
                a.exact_add(&b)
                    .ok_or_else(|| Error::ShapeMismatch(a.shape(), b.shape()))
            }
            Expr::ExactScale(s, e) => {
                let sv = s.eval(vars, scalars, ops)?;
                let c = sv
                    .as_scalar()
                    .ok_or_else(|| Error::Input("exact scale factor must be a scalar".into()))?;
                Ok(e.eval(vars, scalars, ops)?.exact_scale(c))
            }
            Expr::ExactNeg(e) => Ok(e.eval(vars, scalars, ops)?.exact_scale(-1.0)),
        }
    }
}
