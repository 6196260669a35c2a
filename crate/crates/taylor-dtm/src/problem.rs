//! ODE problem representation and normalization to first-order form.
//!
//! A parsed [`OdeProblem`] may still contain higher-order equations
//! (`x'' = -x`). [`OdeProblem::normalize`] reduces every equation to
//! first-order explicit form by introducing chain variables (`x`, `x_d1`,
//! ...), maps derivative conditions onto the chain, and resolves the
//! initial/boundary layout. Solvers require a normalized problem.

use crate::error::{Error, Result};
use crate::expr::Expr;

/// One equation `var{order primes} = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub var: String,
    /// Derivative order of the left side; 1 after normalization.
    pub order: usize,
    pub rhs: Expr,
}

/// One condition `var{deriv primes}(time) = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub var: String,
    pub deriv: usize,
    pub time: f64,
    pub value: f64,
}

/// A condition imposed away from the initial time (the second boundary).
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    /// Index of the constrained variable in the normalized variable list.
    pub var: usize,
    pub time: f64,
    pub value: f64,
}

/// A parsed (and possibly normalized) ODE problem.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    equations: Vec<Equation>,
    conditions: Vec<Condition>,
    t0: f64,
    range: Option<f64>,
    /// Per-variable initial values; `None` marks the unknown of a BVP.
    /// Populated by `normalize`.
    initial: Vec<Option<f64>>,
    boundary: Option<Boundary>,
    normalized: bool,
}

impl OdeProblem {
    /// Assembles a raw (pre-normalization) problem. Used by the parser;
    /// library callers usually go through [`crate::parse_problem`].
    pub(crate) fn from_parts(
        equations: Vec<Equation>,
        conditions: Vec<Condition>,
        t0: f64,
    ) -> Self {
        OdeProblem {
            equations,
            conditions,
            t0,
            range: None,
            initial: Vec::new(),
            boundary: None,
            normalized: false,
        }
    }

    /// Builds an already-first-order IVP directly from expression trees.
    pub fn first_order(
        vars: Vec<(String, Expr)>,
        t0: f64,
        initial: Vec<f64>,
    ) -> Result<OdeProblem> {
        if vars.len() != initial.len() {
            return Err(Error::ConditionCountMismatch {
                required: vars.len(),
                given: initial.len(),
            });
        }
        let equations: Vec<Equation> = vars
            .into_iter()
            .map(|(var, rhs)| Equation { var, order: 1, rhs })
            .collect();
        let conditions = equations
            .iter()
            .zip(&initial)
            .map(|(eq, &value)| Condition {
                var: eq.var.clone(),
                deriv: 0,
                time: t0,
                value,
            })
            .collect();
        OdeProblem::from_parts(equations, conditions, t0).normalize()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// Ordered state-variable names (declaration order).
    pub fn variables(&self) -> Vec<&str> {
        self.equations.iter().map(|e| e.var.as_str()).collect()
    }

    pub fn n_vars(&self) -> usize {
        self.equations.len()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Range length `H`, when known (set explicitly or implied by a
    /// boundary condition).
    pub fn range(&self) -> Option<f64> {
        self.range
    }

    /// Sets the range length `H` (builder style).
    pub fn with_range(mut self, h: f64) -> Self {
        self.range = Some(h);
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Per-variable initial values (`None` = unknown). Empty before
    /// normalization.
    pub fn initial(&self) -> &[Option<f64>] {
        &self.initial
    }

    /// All initial values, or the name of the first unknown one.
    pub fn known_initials(&self) -> Result<Vec<f64>> {
        self.initial
            .iter()
            .enumerate()
            .map(|(j, v)| {
                v.ok_or_else(|| Error::MissingInitialCondition(self.equations[j].var.clone()))
            })
            .collect()
    }

    /// Index of the single unknown initial value, if any.
    pub fn unknown_initial(&self) -> Option<usize> {
        self.initial.iter().position(|v| v.is_none())
    }

    pub fn boundary(&self) -> Option<&Boundary> {
        self.boundary.as_ref()
    }

    /// Copy of the problem with variable `var` seeded to `value`
    /// (shooting candidates).
    pub fn with_initial(&self, var: usize, value: f64) -> OdeProblem {
        let mut p = self.clone();
        p.initial[var] = Some(value);
        p
    }

    /// Sum of equation orders = number of conditions required.
    pub fn total_order(&self) -> usize {
        self.equations.iter().map(|e| e.order).sum()
    }

    /// Reduces the system to first-order explicit form.
    ///
    /// Each order-`p` equation introduces `p - 1` chain variables with
    /// equations `v' = v_d1, ..., v_d{p-1}' = rhs`; conditions on
    /// derivatives map onto the chain. Validates that the condition count
    /// matches the total system order and that at most one boundary
    /// condition with at most one unknown initial remains. Idempotent.
    pub fn normalize(&self) -> Result<OdeProblem> {
        for eq in &self.equations {
            if eq.order == 0 {
                return Err(Error::ImplicitEquation(eq.var.clone()));
            }
        }

        let mut used: Vec<String> = self.equations.iter().map(|e| e.var.clone()).collect();
        let mut chains: Vec<Vec<String>> = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let mut chain = vec![eq.var.clone()];
            for d in 1..eq.order {
                let mut name = format!("{}_d{}", eq.var, d);
                while used.contains(&name) {
                    name.push('_');
                }
                used.push(name.clone());
                chain.push(name);
            }
            chains.push(chain);
        }

        let mut equations = Vec::new();
        for (eq, chain) in self.equations.iter().zip(&chains) {
            for j in 0..chain.len() - 1 {
                equations.push(Equation {
                    var: chain[j].clone(),
                    order: 1,
                    rhs: Expr::Var(chain[j + 1].clone()),
                });
            }
            equations.push(Equation {
                var: chain.last().unwrap().clone(),
                order: 1,
                rhs: eq.rhs.clone(),
            });
        }

        // Parsed problems are already reference-checked; programmatically
        // built ones get the same guarantee here.
        let declared: Vec<&str> = self.equations.iter().map(|e| e.var.as_str()).collect();
        for eq in &self.equations {
            let mut referenced = Vec::new();
            eq.rhs.referenced_vars(&mut referenced);
            for name in referenced {
                if !declared.contains(&name) {
                    return Err(Error::UndeclaredVariable(name.to_string()));
                }
            }
        }

        let mut conditions = Vec::new();
        for c in &self.conditions {
            let eq_idx = self
                .equations
                .iter()
                .position(|e| e.var == c.var)
                .ok_or_else(|| Error::UndeclaredVariable(c.var.clone()))?;
            if c.deriv >= self.equations[eq_idx].order {
                return Err(Error::OverdeterminedSystem(format!(
                    "condition on derivative {} of '{}' exceeds its equation order {}",
                    c.deriv, c.var, self.equations[eq_idx].order
                )));
            }
            conditions.push(Condition {
                var: chains[eq_idx][c.deriv].clone(),
                deriv: 0,
                time: c.time,
                value: c.value,
            });
        }

        let n = equations.len();
        if conditions.len() != n {
            return Err(Error::ConditionCountMismatch {
                required: n,
                given: conditions.len(),
            });
        }

        let t0 = conditions
            .iter()
            .map(|c| c.time)
            .fold(f64::INFINITY, f64::min);

        let var_index = |name: &str| equations.iter().position(|e| e.var == name).unwrap();
        let mut initial: Vec<Option<f64>> = vec![None; n];
        let mut boundary: Option<Boundary> = None;
        for c in &conditions {
            let j = var_index(&c.var);
            if c.time == t0 {
                initial[j] = Some(c.value);
            } else {
                if boundary.is_some() {
                    return Err(Error::InvalidConfig(
                        "multi-point boundary problems are not supported \
                         (at most one condition away from t0)"
                            .to_string(),
                    ));
                }
                boundary = Some(Boundary {
                    var: j,
                    time: c.time,
                    value: c.value,
                });
            }
        }

        let range = self.range.or(boundary.as_ref().map(|b| b.time - t0));

        Ok(OdeProblem {
            equations,
            conditions,
            t0,
            range,
            initial,
            boundary,
            normalized: true,
        })
    }

    /// Canonical text form; [`crate::parse_problem`] of the output
    /// reproduces the problem.
    pub fn to_text(&self) -> String {
        let mut stmts = Vec::new();
        for eq in &self.equations {
            stmts.push(format!("{}{} = {}", eq.var, "'".repeat(eq.order), eq.rhs));
        }
        for c in &self.conditions {
            stmts.push(format!(
                "{}{}({}) = {}",
                c.var,
                "'".repeat(c.deriv),
                c.time,
                c.value
            ));
        }
        stmts.join(";\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    fn harmonic() -> OdeProblem {
        // x'' = -x, x(0) = 0, x'(0) = 1.
        OdeProblem::from_parts(
            vec![Equation {
                var: "x".into(),
                order: 2,
                rhs: Expr::Neg(Box::new(var("x"))),
            }],
            vec![
                Condition {
                    var: "x".into(),
                    deriv: 0,
                    time: 0.0,
                    value: 0.0,
                },
                Condition {
                    var: "x".into(),
                    deriv: 1,
                    time: 0.0,
                    value: 1.0,
                },
            ],
            0.0,
        )
    }

    #[test]
    fn second_order_reduces_to_chain() {
        let p = harmonic().normalize().unwrap();
        assert_eq!(p.variables(), vec!["x", "x_d1"]);
        assert_eq!(p.equations()[0].rhs, var("x_d1"));
        assert_eq!(p.equations()[1].rhs, Expr::Neg(Box::new(var("x"))));
        assert_eq!(p.initial(), &[Some(0.0), Some(1.0)]);
        assert!(p.boundary().is_none());
    }

    #[test]
    fn first_order_system_is_unchanged() {
        let p = OdeProblem::first_order(
            vec![
                ("x".into(), var("y")),
                ("y".into(), Expr::Neg(Box::new(var("x")))),
            ],
            0.0,
            vec![0.0, 1.0],
        )
        .unwrap();
        let q = p.normalize().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn normalize_is_idempotent() {
        let p = harmonic().normalize().unwrap();
        assert_eq!(p.normalize().unwrap(), p);
    }

    #[test]
    fn condition_count_is_checked() {
        let mut p = harmonic();
        p.conditions.pop();
        assert_eq!(
            p.normalize(),
            Err(Error::ConditionCountMismatch {
                required: 2,
                given: 1
            })
        );
    }

    #[test]
    fn order_zero_equation_is_implicit() {
        let p = OdeProblem::from_parts(
            vec![Equation {
                var: "x".into(),
                order: 0,
                rhs: Expr::Add(Box::new(var("x")), Box::new(Expr::Const(1.0))),
            }],
            vec![],
            0.0,
        );
        assert_eq!(p.normalize(), Err(Error::ImplicitEquation("x".into())));
    }

    #[test]
    fn boundary_condition_marks_unknown_initial() {
        // x'' = -x, x(0) = 0, x(1) = 1: x'(0) unknown.
        let p = OdeProblem::from_parts(
            vec![Equation {
                var: "x".into(),
                order: 2,
                rhs: Expr::Neg(Box::new(var("x"))),
            }],
            vec![
                Condition {
                    var: "x".into(),
                    deriv: 0,
                    time: 0.0,
                    value: 0.0,
                },
                Condition {
                    var: "x".into(),
                    deriv: 0,
                    time: 1.0,
                    value: 1.0,
                },
            ],
            0.0,
        )
        .normalize()
        .unwrap();
        assert_eq!(p.unknown_initial(), Some(1));
        let b = p.boundary().unwrap();
        assert_eq!((b.var, b.time, b.value), (0, 1.0, 1.0));
        assert_eq!(p.range(), Some(1.0));
    }

    #[test]
    fn programmatic_problems_are_reference_checked() {
        let p = OdeProblem::first_order(vec![("x".into(), var("ghost"))], 0.0, vec![1.0]);
        assert_eq!(p, Err(Error::UndeclaredVariable("ghost".into())));
    }

    #[test]
    fn chain_names_avoid_collisions() {
        let p = OdeProblem::from_parts(
            vec![
                Equation {
                    var: "x".into(),
                    order: 2,
                    rhs: var("x_d1"),
                },
                Equation {
                    var: "x_d1".into(),
                    order: 1,
                    rhs: var("x"),
                },
            ],
            vec![
                Condition {
                    var: "x".into(),
                    deriv: 0,
                    time: 0.0,
                    value: 1.0,
                },
                Condition {
                    var: "x".into(),
                    deriv: 1,
                    time: 0.0,
                    value: 0.0,
                },
                Condition {
                    var: "x_d1".into(),
                    deriv: 0,
                    time: 0.0,
                    value: 2.0,
                },
            ],
            0.0,
        );
        let q = p.normalize().unwrap();
        assert_eq!(q.variables(), vec!["x", "x_d1_", "x_d1"]);
    }
}
