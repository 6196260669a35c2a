//! The Taylor transformation proper: right-hand sides compiled into a tape
//! of coefficient recurrences, advanced order by order through
//! `(k+1) X_{k+1} = F_k`.
//!
//! Each tape slot mirrors one expression node and holds the coefficient
//! vector of that subexpression. Advancing to order `k` computes only the
//! `k`-th coefficient of every slot (running convolutions), so an order-`N`
//! expansion costs `O(N^2)` per scalar nonlinearity; no derivatives of the
//! right-hand side are ever formed symbolically.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::OdeProblem;
use crate::series::TaylorSeries;

/// Integer exponents up to this bound compile to multiplication chains,
/// which stay defined when the leading coefficient vanishes; larger or
/// non-integer exponents use the Euler power recurrence.
const MAX_CHAINED_POWER: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum SlotOp {
    Const(f64),
    Time,
    State(usize),
    Neg(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow {
        arg: usize,
        exponent: f64,
    },
    Exp(usize),
    Log(usize),
    /// Sine of `arg`; `partner` is the coupled cosine slot.
    Sin {
        arg: usize,
        partner: usize,
    },
    /// Cosine of `arg`; `partner` is the coupled sine slot.
    Cos {
        arg: usize,
        partner: usize,
    },
}

/// Hash-consing key for syntactic common-subexpression sharing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Const(u64),
    Time,
    State(usize),
    Neg(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, u64),
    Exp(usize),
    Log(usize),
    Sin(usize),
    Cos(usize),
}

/// Compiled tape: topologically ordered slots plus the slot map for state
/// variables and their right-hand-side images. Immutable and shareable.
#[derive(Debug, Clone)]
pub struct RecurrencePlan {
    slots: Vec<SlotOp>,
    state_slots: Vec<usize>,
    rhs_slots: Vec<usize>,
}

impl RecurrencePlan {
    /// Number of tape slots.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of state variables.
    pub fn n_vars(&self) -> usize {
        self.state_slots.len()
    }

    /// Slot index holding the image `F` of variable `j`'s right-hand side.
    pub fn rhs_slot(&self, j: usize) -> usize {
        self.rhs_slots[j]
    }
}

struct Compiler {
    slots: Vec<SlotOp>,
    memo: HashMap<Key, usize>,
}

impl Compiler {
    fn intern(&mut self, key: Key, op: SlotOp) -> usize {
        if let Some(&i) = self.memo.get(&key) {
            return i;
        }
        let i = self.slots.len();
        self.slots.push(op);
        self.memo.insert(key, i);
        i
    }

    fn sin_cos_pair(&mut self, arg: usize) -> (usize, usize) {
        if let Some(&s) = self.memo.get(&Key::Sin(arg)) {
            return (s, self.memo[&Key::Cos(arg)]);
        }
        let s = self.slots.len();
        let c = s + 1;
        self.slots.push(SlotOp::Sin { arg, partner: c });
        self.slots.push(SlotOp::Cos { arg, partner: s });
        self.memo.insert(Key::Sin(arg), s);
        self.memo.insert(Key::Cos(arg), c);
        (s, c)
    }

    fn compile(&mut self, e: &Expr, vars: &[&str]) -> usize {
        match e {
            Expr::Const(c) => self.intern(Key::Const(c.to_bits()), SlotOp::Const(*c)),
            Expr::Time => self.intern(Key::Time, SlotOp::Time),
            Expr::Var(name) => {
                // State slots are interned ahead of compilation.
                let j = vars.iter().position(|v| v == name).expect("validated var");
                self.memo[&Key::State(j)]
            }
            Expr::Neg(a) => {
                let a = self.compile(a, vars);
                self.intern(Key::Neg(a), SlotOp::Neg(a))
            }
            Expr::Add(a, b) => {
                let a = self.compile(a, vars);
                let b = self.compile(b, vars);
                self.intern(Key::Add(a, b), SlotOp::Add(a, b))
            }
            Expr::Sub(a, b) => {
                let a = self.compile(a, vars);
                let b = self.compile(b, vars);
                self.intern(Key::Sub(a, b), SlotOp::Sub(a, b))
            }
            Expr::Mul(a, b) => {
                let a = self.compile(a, vars);
                let b = self.compile(b, vars);
                self.intern(Key::Mul(a, b), SlotOp::Mul(a, b))
            }
            Expr::Div(a, b) => {
                let a = self.compile(a, vars);
                let b = self.compile(b, vars);
                self.intern(Key::Div(a, b), SlotOp::Div(a, b))
            }
            Expr::Pow(a, exponent) => {
                let a = self.compile(a, vars);
                let e = *exponent;
                if e.fract() == 0.0 && (0.0..=MAX_CHAINED_POWER).contains(&e) {
                    let m = e as u64;
                    if m == 0 {
                        return self.intern(Key::Const(1f64.to_bits()), SlotOp::Const(1.0));
                    }
                    let mut acc = a;
                    for _ in 1..m {
                        acc = self.intern(Key::Mul(acc, a), SlotOp::Mul(acc, a));
                    }
                    acc
                } else {
                    self.intern(
                        Key::Pow(a, e.to_bits()),
                        SlotOp::Pow {
                            arg: a,
                            exponent: e,
                        },
                    )
                }
            }
            Expr::Exp(a) => {
                let a = self.compile(a, vars);
                self.intern(Key::Exp(a), SlotOp::Exp(a))
            }
            Expr::Log(a) => {
                let a = self.compile(a, vars);
                self.intern(Key::Log(a), SlotOp::Log(a))
            }
            Expr::Sin(a) => {
                let a = self.compile(a, vars);
                self.sin_cos_pair(a).0
            }
            Expr::Cos(a) => {
                let a = self.compile(a, vars);
                self.sin_cos_pair(a).1
            }
        }
    }
}

/// Compiles a normalized first-order problem into its recurrence tape.
/// Identical subtrees share slots.
pub fn compile_plan(p: &OdeProblem) -> Result<RecurrencePlan> {
    if !p.is_normalized() {
        return Err(Error::InvalidConfig(
            "problem must be normalized before compilation".to_string(),
        ));
    }
    let vars = p.variables();
    let mut c = Compiler {
        slots: Vec::new(),
        memo: HashMap::new(),
    };
    let state_slots: Vec<usize> = (0..vars.len())
        .map(|j| c.intern(Key::State(j), SlotOp::State(j)))
        .collect();
    let rhs_slots: Vec<usize> = p
        .equations()
        .iter()
        .map(|eq| c.compile(&eq.rhs, &vars))
        .collect();
    Ok(RecurrencePlan {
        slots: c.slots,
        state_slots,
        rhs_slots,
    })
}

/// Per-slot coefficient vectors, all filled to a common current order.
/// Single-owner mutable; one solve per state.
#[derive(Debug, Clone)]
pub struct SeriesState {
    base: f64,
    order: usize,
    coeffs: Vec<Vec<f64>>,
}

impl SeriesState {
    /// Seeds `X_0 = alpha` for every state variable and fills coefficient 0
    /// of every tape slot.
    pub fn seed(plan: &RecurrencePlan, alpha: &[f64], t_i: f64) -> Result<SeriesState> {
        if alpha.len() != plan.n_vars() {
            return Err(Error::InvalidConfig(format!(
                "expected {} initial values, got {}",
                plan.n_vars(),
                alpha.len()
            )));
        }
        if !t_i.is_finite() || alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let mut state = SeriesState {
            base: t_i,
            order: 0,
            coeffs: vec![Vec::new(); plan.len()],
        };
        for (j, &s) in plan.state_slots.iter().enumerate() {
            state.coeffs[s].push(alpha[j]);
        }
        for s in 0..plan.len() {
            if matches!(plan.slots[s], SlotOp::State(_)) {
                continue;
            }
            let v = slot_coeff(plan, &state.coeffs, t_i, s, 0);
            if !v.is_finite() {
                return Err(Error::NonFiniteCoefficient { order: 0 });
            }
            state.coeffs[s].push(v);
        }
        Ok(state)
    }

    /// Current common order `k`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Expansion point.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Coefficient `k` of tape slot `s`.
    pub fn coeff(&self, slot: usize, k: usize) -> f64 {
        self.coeffs[slot][k]
    }

    /// The accumulated series of state variable `j`.
    pub fn variable_series(&self, plan: &RecurrencePlan, j: usize) -> TaylorSeries {
        TaylorSeries::new(self.base, self.coeffs[plan.state_slots[j]].clone())
            .expect("state coefficients are checked finite")
    }
}

/// Computes coefficient `k` of slot `s` from coefficients already present.
fn slot_coeff(plan: &RecurrencePlan, coeffs: &[Vec<f64>], base: f64, s: usize, k: usize) -> f64 {
    match plan.slots[s] {
        SlotOp::Const(c) => {
            if k == 0 {
                c
            } else {
                0.0
            }
        }
        SlotOp::Time => match k {
            0 => base,
            1 => 1.0,
            _ => 0.0,
        },
        SlotOp::State(_) => coeffs[s][k],
        SlotOp::Neg(a) => -coeffs[a][k],
        SlotOp::Add(a, b) => coeffs[a][k] + coeffs[b][k],
        SlotOp::Sub(a, b) => coeffs[a][k] - coeffs[b][k],
        SlotOp::Mul(a, b) => {
            let mut sum = 0.0;
            for i in 0..=k {
                sum += coeffs[a][i] * coeffs[b][k - i];
            }
            sum
        }
        SlotOp::Div(x, y) => {
            let mut sum = coeffs[x][k];
            for i in 0..k {
                sum -= coeffs[s][i] * coeffs[y][k - i];
            }
            sum / coeffs[y][0]
        }
        SlotOp::Pow { arg, exponent } => {
            let u0 = coeffs[arg][0];
            if k == 0 {
                u0.powf(exponent)
            } else {
                let mut sum = 0.0;
                for i in 1..=k {
                    let w = (exponent + 1.0) * i as f64 / k as f64 - 1.0;
                    sum += w * (coeffs[arg][i] / u0) * coeffs[s][k - i];
                }
                sum
            }
        }
        SlotOp::Exp(u) => {
            if k == 0 {
                coeffs[u][0].exp()
            } else {
                let mut sum = 0.0;
                for j in 1..=k {
                    sum += j as f64 * coeffs[u][j] * coeffs[s][k - j];
                }
                sum / k as f64
            }
        }
        SlotOp::Log(u) => {
            if k == 0 {
                coeffs[u][0].ln()
            } else {
                let mut sum = 0.0;
                for j in 1..k {
                    sum += j as f64 * coeffs[s][j] * coeffs[u][k - j];
                }
                (coeffs[u][k] - sum / k as f64) / coeffs[u][0]
            }
        }
        SlotOp::Sin { arg, partner } => {
            if k == 0 {
                coeffs[arg][0].sin()
            } else {
                // Reads the partner only below order k; the pair advances
                // in lockstep.
                let mut sum = 0.0;
                for j in 1..=k {
                    sum += j as f64 * coeffs[arg][j] * coeffs[partner][k - j];
                }
                sum / k as f64
            }
        }
        SlotOp::Cos { arg, partner } => {
            if k == 0 {
                coeffs[arg][0].cos()
            } else {
                let mut sum = 0.0;
                for j in 1..=k {
                    sum += j as f64 * coeffs[arg][j] * coeffs[partner][k - j];
                }
                -sum / k as f64
            }
        }
    }
}

/// One order advance: sets `X_{k+1} = F_k / (k+1)` for every state
/// variable, then fills coefficient `k+1` of every other slot.
pub fn advance_order(plan: &RecurrencePlan, state: &mut SeriesState) -> Result<()> {
    let k = state.order;
    let k1 = k + 1;
    for (j, &s) in plan.state_slots.iter().enumerate() {
        let f_k = state.coeffs[plan.rhs_slots[j]][k];
        let x = f_k / k1 as f64;
        if !x.is_finite() {
            return Err(Error::NonFiniteCoefficient { order: k1 });
        }
        state.coeffs[s].push(x);
    }
    for s in 0..plan.len() {
        if matches!(plan.slots[s], SlotOp::State(_)) {
            continue;
        }
        let v = slot_coeff(plan, &state.coeffs, state.base, s, k1);
        if !v.is_finite() {
            return Err(Error::NonFiniteCoefficient { order: k1 });
        }
        state.coeffs[s].push(v);
    }
    state.order = k1;
    Ok(())
}

/// Expands order-`n` series for every state variable from the seed
/// `x(t_i) = alpha`.
pub fn expand_series(
    plan: &RecurrencePlan,
    alpha: &[f64],
    t_i: f64,
    n: usize,
) -> Result<Vec<TaylorSeries>> {
    let mut state = SeriesState::seed(plan, alpha, t_i)?;
    for _ in 0..n {
        advance_order(plan, &mut state)?;
    }
    Ok((0..plan.n_vars())
        .map(|j| state.variable_series(plan, j))
        .collect())
}
