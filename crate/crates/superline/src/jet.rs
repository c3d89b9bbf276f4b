//! Formal jets of a generic density pair and the action on operators.
//!
//! The field acts on an operator by
//!
//! ```text
//! X_H . A = L^mu_{X_H} o A - (-1)^{|A||H|} A o L^{(lambda,nu)}_{X_H}
//! ```
//!
//! Both sides are evaluated on formal jet symbols `f_{a,eps}`, `g_{b,eps}`
//! standing for `dx^a` of the two components of generic densities; the
//! result is bilinear in the two symbol families and matches the canonical
//! key basis, so the acted operator is read off by exact pattern matching
//! instead of solving a linear system. The symbols are ordinary (even)
//! coefficient functions: all sign bookkeeping lives in the explicit
//! `theta` factors, which square to zero.

use std::collections::BTreeMap;

use crate::biop::{BilinOp, Key, OpContext};
use crate::error::{Error, Result};
use crate::liealg::ContactField;
use crate::poly::Poly;
use crate::scalar::Rat;
use crate::superfield::{Parity, SuperFn};

/// One term `x^m theta^tau f_{a,eps}` of a single-leg expression.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct LegKey {
    m: u32,
    tau: u8,
    a: u32,
    eps: u8,
}

/// Expression linear in one jet-symbol family.
#[derive(Clone, Debug, Default)]
struct JetLeg {
    terms: BTreeMap<LegKey, Rat>,
}

impl JetLeg {
    fn generic(parity: Parity) -> JetLeg {
        let key = match parity {
            Parity::Even => LegKey {
                m: 0,
                tau: 0,
                a: 0,
                eps: 0,
            },
            // the odd component enters as f_1 * theta
            Parity::Odd => LegKey {
                m: 0,
                tau: 1,
                a: 0,
                eps: 1,
            },
        };
        JetLeg {
            terms: BTreeMap::from([(key, Rat::one())]),
        }
    }

    fn insert(&mut self, k: LegKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn add(&self, other: &JetLeg) -> JetLeg {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    fn scale(&self, s: &Rat) -> JetLeg {
        if s.is_zero() {
            return JetLeg::default();
        }
        JetLeg {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    fn dx(&self) -> JetLeg {
        let mut out = JetLeg::default();
        for (k, c) in &self.terms {
            if k.m > 0 {
                out.insert(
                    LegKey { m: k.m - 1, ..*k },
                    c * &Rat::from(k.m as i64),
                );
            }
            out.insert(LegKey { a: k.a + 1, ..*k }, c.clone());
        }
        out
    }

    fn dtheta(&self) -> JetLeg {
        let mut out = JetLeg::default();
        for (k, c) in &self.terms {
            if k.tau == 1 {
                out.insert(LegKey { tau: 0, ..*k }, c.clone());
            }
        }
        out
    }

    fn mul_theta(&self) -> JetLeg {
        let mut out = JetLeg::default();
        for (k, c) in &self.terms {
            if k.tau == 0 {
                out.insert(LegKey { tau: 1, ..*k }, c.clone());
            }
        }
        out
    }

    fn mul_poly(&self, p: &Poly) -> JetLeg {
        let mut out = JetLeg::default();
        for (d, pc) in p.coeffs().iter().enumerate() {
            if pc.is_zero() {
                continue;
            }
            for (k, c) in &self.terms {
                out.insert(LegKey { m: k.m + d as u32, ..*k }, c * pc);
            }
        }
        out
    }

    /// Left multiplication by a superfunction coefficient.
    fn mul_superfn(&self, c: &SuperFn) -> JetLeg {
        self.mul_poly(&c.even)
            .add(&self.mul_theta().mul_poly(&c.odd))
    }

    fn eta_bar(&self) -> JetLeg {
        self.dtheta()
            .add(&self.dx().mul_theta().scale(&-Rat::one()))
    }

    /// `L^w_{X_H} = H dx + (1/2) eta(H) etabar + w H'`.
    fn lie(&self, x: &ContactField, w: &Rat) -> JetLeg {
        let t1 = self.dx().mul_superfn(&x.h);
        let t2 = self.eta_bar().mul_superfn(&x.h.eta()).scale(&Rat::half());
        let t3 = self.mul_superfn(&x.h.dx()).scale(w);
        t1.add(&t2).add(&t3)
    }
}

/// Expression bilinear in the two symbol families; term keys reuse the
/// operator [`Key`] layout with `(i, ef)`/`(j, eg)` read as jet indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JetExpr {
    terms: BTreeMap<Key, Rat>,
}

impl JetExpr {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, k: Key, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn add_assign(&mut self, other: &JetExpr) {
        for (k, c) in &other.terms {
            self.insert(*k, c.clone());
        }
    }

    fn scale(&self, s: &Rat) -> JetExpr {
        if s.is_zero() {
            return JetExpr::default();
        }
        JetExpr {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    /// Product of an f-leg and a g-leg, in that order.
    fn from_legs(p: &JetLeg, q: &JetLeg) -> JetExpr {
        let mut out = JetExpr::default();
        for (kp, cp) in &p.terms {
            for (kq, cq) in &q.terms {
                let tau = kp.tau + kq.tau;
                if tau > 1 {
                    continue;
                }
                out.insert(
                    Key::new(kp.m + kq.m, tau, kp.a, kp.eps, kq.a, kq.eps),
                    cp * cq,
                );
            }
        }
        out
    }

    fn dx(&self) -> JetExpr {
        let mut out = JetExpr::default();
        for (k, c) in &self.terms {
            if k.m > 0 {
                out.insert(Key { m: k.m - 1, ..*k }, c * &Rat::from(k.m as i64));
            }
            out.insert(Key { i: k.i + 1, ..*k }, c.clone());
            out.insert(Key { j: k.j + 1, ..*k }, c.clone());
        }
        out
    }

    fn dtheta(&self) -> JetExpr {
        let mut out = JetExpr::default();
        for (k, c) in &self.terms {
            if k.tau == 1 {
                out.insert(Key { tau: 0, ..*k }, c.clone());
            }
        }
        out
    }

    fn mul_theta(&self) -> JetExpr {
        let mut out = JetExpr::default();
        for (k, c) in &self.terms {
            if k.tau == 0 {
                out.insert(Key { tau: 1, ..*k }, c.clone());
            }
        }
        out
    }

    fn mul_poly(&self, p: &Poly) -> JetExpr {
        let mut out = JetExpr::default();
        for (d, pc) in p.coeffs().iter().enumerate() {
            if pc.is_zero() {
                continue;
            }
            for (k, c) in &self.terms {
                out.insert(Key { m: k.m + d as u32, ..*k }, c * pc);
            }
        }
        out
    }

    fn mul_superfn(&self, c: &SuperFn) -> JetExpr {
        let mut out = self.mul_poly(&c.even);
        out.add_assign(&self.mul_theta().mul_poly(&c.odd));
        out
    }

    fn eta_bar(&self) -> JetExpr {
        let mut out = self.dtheta();
        out.add_assign(&self.dx().mul_theta().scale(&-Rat::one()));
        out
    }

    fn lie(&self, x: &ContactField, w: &Rat) -> JetExpr {
        let mut out = self.dx().mul_superfn(&x.h);
        out.add_assign(&self.eta_bar().mul_superfn(&x.h.eta()).scale(&Rat::half()));
        out.add_assign(&self.mul_superfn(&x.h.dx()).scale(w));
        out
    }
}

/// Evaluates an operator on a pair of leg expressions.
fn eval_on_legs(a: &BilinOp, p: &JetLeg, q: &JetLeg) -> JetExpr {
    // derivative tables, indexed by [eps][order]
    let max_i = a.terms().map(|(k, _)| k.i).max().unwrap_or(0) as usize;
    let max_j = a.terms().map(|(k, _)| k.j).max().unwrap_or(0) as usize;
    let table = |leg: &JetLeg, maxd: usize| -> [Vec<JetLeg>; 2] {
        let mut plain = vec![leg.clone()];
        for d in 0..maxd {
            let next = plain[d].dx();
            plain.push(next);
        }
        let mut theta = vec![leg.dtheta()];
        for d in 0..maxd {
            let next = theta[d].dx();
            theta.push(next);
        }
        [plain, theta]
    };
    let ptab = table(p, max_i);
    let qtab = table(q, max_j);
    let mut out = JetExpr::default();
    for (k, c) in a.terms() {
        let leg1 = &ptab[k.ef as usize][k.i as usize];
        let leg2 = &qtab[k.eg as usize][k.j as usize];
        let mut term = JetExpr::from_legs(leg1, leg2);
        if k.tau == 1 {
            term = term.mul_theta();
        }
        if k.m > 0 {
            term = term.mul_poly(&Poly::monomial(k.m as usize, Rat::one()));
        }
        out.add_assign(&term.scale(c));
    }
    out
}

/// Evaluates an operator on the full generic pair.
pub fn eval_on_generic(a: &BilinOp) -> JetExpr {
    let p = JetLeg::generic(Parity::Even).add(&JetLeg::generic(Parity::Odd));
    eval_on_legs(a, &p, &p)
}

fn key_generic_expr(key: &Key, ctx: &OpContext) -> JetExpr {
    let single = BilinOp::single(ctx.clone(), *key, Rat::one()).expect("caller checks bounds");
    eval_on_generic(&single)
}

/// Reads canonical operator coefficients off a jet expression.
///
/// Keys with `tau = 1` evaluate to a single jet term; keys with `tau = 0`
/// evaluate to their diagonal term plus corrections at `tau = 1`, so the
/// system is triangular and the match is exact. Any leftover term means
/// the expression is outside the canonical span, which is an internal
/// consistency fault.
pub fn extract(expr: &JetExpr, ctx: &OpContext) -> Result<BilinOp> {
    extract_mode(expr, ctx, false)
}

fn extract_mode(expr: &JetExpr, ctx: &OpContext, classical: bool) -> Result<BilinOp> {
    if classical {
        // the theta-free generic pair evaluates every classical key to its
        // own jet term, so the match is the identity
        for k in expr.terms.keys() {
            if !k.is_classical() {
                return Err(Error::Extraction(format!(
                    "non-classical jet term {k:?} in a classical computation"
                )));
            }
            if !ctx.key_fits(k) {
                return Err(Error::Extraction(format!(
                    "extracted key {k:?} exceeds the target context"
                )));
            }
        }
        return BilinOp::from_terms(
            ctx.clone(),
            expr.terms.iter().map(|(k, c)| (*k, c.clone())),
        );
    }
    let mut residual = expr.clone();
    let mut terms: Vec<(Key, Rat)> = Vec::new();
    let plain: Vec<(Key, Rat)> = expr
        .terms
        .iter()
        .filter(|(k, _)| k.tau == 0)
        .map(|(k, c)| (*k, c.clone()))
        .collect();
    for (k, c) in plain {
        if !ctx.key_fits(&k) {
            return Err(Error::Extraction(format!(
                "extracted key {k:?} exceeds the target context"
            )));
        }
        residual.add_assign(&key_generic_expr(&k, ctx).scale(&-&c));
        terms.push((k, c));
    }
    for (k, c) in &residual.terms {
        if k.tau != 1 {
            return Err(Error::Extraction(format!(
                "unmatched jet term {k:?} after triangular elimination"
            )));
        }
        if !ctx.key_fits(k) {
            return Err(Error::Extraction(format!(
                "extracted key {k:?} exceeds the target context"
            )));
        }
        terms.push((*k, c.clone()));
    }
    BilinOp::from_terms(ctx.clone(), terms)
}

/// The action of a contact field on an operator between super modules,
/// computed on formal jets.
///
/// The result lives in a context with one extra unit of order and
/// coefficient x-degree headroom; only quadratic hamiltonians and odd
/// fields actually use it.
pub fn act(x: &ContactField, a: &BilinOp) -> Result<BilinOp> {
    act_mode(x, a, false)
}

/// Same action on the theta-free classical modules: only the even-even
/// component of the generic pair exists, which keeps everything
/// theta-free for even hamiltonians.
pub fn act_classical(x: &ContactField, a: &BilinOp) -> Result<BilinOp> {
    act_mode(x, a, true)
}

fn act_mode(x: &ContactField, a: &BilinOp, classical: bool) -> Result<BilinOp> {
    // odd generators can raise total order by one, so give the target a
    // unit of headroom in both bounds
    let mut out_ctx = a.ctx.with_xdeg(a.ctx.max_xdeg + 1);
    out_ctx.max_order = a.ctx.max_order + 1;
    let Some(ap) = a.parity_opt()? else {
        return Ok(BilinOp::zero(out_ctx));
    };
    let xp = x.parity()?;
    let sign_a = Parity::koszul(ap, xp);
    let sectors: &[Parity] = if classical {
        &[Parity::Even]
    } else {
        &[Parity::Even, Parity::Odd]
    };
    let mut total = JetExpr::default();
    for &pf in sectors {
        for &pg in sectors {
            let pleg = JetLeg::generic(pf);
            let qleg = JetLeg::generic(pg);
            let lhs = eval_on_legs(a, &pleg, &qleg).lie(x, &a.ctx.mu);
            let sign_f = Parity::koszul(xp, pf);
            let mut rhs = eval_on_legs(a, &pleg.lie(x, &a.ctx.lambda), &qleg);
            rhs.add_assign(&eval_on_legs(a, &pleg, &qleg.lie(x, &a.ctx.nu)).scale(&sign_f));
            total.add_assign(&lhs);
            total.add_assign(&rhs.scale(&-&sign_a));
        }
    }
    extract_mode(&total, &out_ctx, classical)
}
