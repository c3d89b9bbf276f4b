//! Bilinear differential operators between weighted density modules.
//!
//! An operator maps a pair of densities of weights `(lambda, nu)` to a
//! density of weight `mu`. It is stored in canonical form as a rational
//! combination of basis keys `(m, tau, i, ef, j, eg)`, where the key acts
//! by
//!
//! ```text
//! (F, G) |-> x^m theta^tau (dx^i dtheta^ef F) (dx^j dtheta^eg G)
//! ```
//!
//! with products taken left to right through superfunction multiplication.
//! The basis maps are linearly independent, so coefficient equality is
//! operator equality. The parity of a key is `tau + ef + eg mod 2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::Density;
use crate::scalar::Rat;
use crate::superfield::{Parity, SuperFn};

/// Weights and truncation bounds shared by a family of operators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpContext {
    pub lambda: Rat,
    pub nu: Rat,
    pub mu: Rat,
    /// Keys satisfy `i + j + ef + eg <= 2 * max_order`.
    pub max_order: usize,
    /// Keys satisfy `m <= max_xdeg`.
    pub max_xdeg: usize,
}

impl OpContext {
    pub fn new(lambda: Rat, nu: Rat, mu: Rat, max_order: usize, max_xdeg: usize) -> Self {
        OpContext {
            lambda,
            nu,
            mu,
            max_order,
            max_xdeg,
        }
    }

    /// `mu - lambda - nu`.
    pub fn delta(&self) -> Rat {
        &(&self.mu - &self.lambda) - &self.nu
    }

    pub fn with_xdeg(&self, max_xdeg: usize) -> Self {
        OpContext {
            max_xdeg,
            ..self.clone()
        }
    }

    pub fn same_weights(&self, other: &OpContext) -> bool {
        self.lambda == other.lambda && self.nu == other.nu && self.mu == other.mu
    }

    pub fn key_fits(&self, key: &Key) -> bool {
        key.m as usize <= self.max_xdeg && key.order() <= 2 * self.max_order
    }
}

/// Canonical basis key; `Ord` is lexicographic on the 6-tuple.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Key {
    pub m: u32,
    pub tau: u8,
    pub i: u32,
    pub ef: u8,
    pub j: u32,
    pub eg: u8,
}

impl Key {
    pub fn new(m: u32, tau: u8, i: u32, ef: u8, j: u32, eg: u8) -> Self {
        debug_assert!(tau <= 1 && ef <= 1 && eg <= 1);
        Key {
            m,
            tau,
            i,
            ef,
            j,
            eg,
        }
    }

    pub fn classical(m: u32, i: u32, j: u32) -> Self {
        Key::new(m, 0, i, 0, j, 0)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_u8(self.tau + self.ef + self.eg)
    }

    pub fn order(&self) -> usize {
        (self.i + self.j) as usize + (self.ef + self.eg) as usize
    }

    pub fn is_classical(&self) -> bool {
        self.tau == 0 && self.ef == 0 && self.eg == 0
    }
}

/// Eigenvalue of the `X_x` action on the basis operator with this key:
/// `mu - lambda - nu + m - i - j + (tau - ef - eg)/2`.
pub fn weight_of_key(ctx: &OpContext, key: &Key) -> Rat {
    let half_part = Rat::new(key.tau as i64 - key.ef as i64 - key.eg as i64, 2);
    &(&ctx.delta() + &Rat::from(key.m as i64 - key.i as i64 - key.j as i64)) + &half_part
}

/// One serialized operator term.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct KeyRecord {
    pub m: u32,
    pub tau: u8,
    pub i: u32,
    pub ef: u8,
    pub j: u32,
    pub eg: u8,
    pub coeff: Rat,
}

/// A bilinear differential operator in canonical form.
#[derive(Clone, Debug)]
pub struct BilinOp {
    pub ctx: OpContext,
    terms: BTreeMap<Key, Rat>,
}

impl PartialEq for BilinOp {
    /// Equality of weights and coefficients; truncation bounds are not
    /// part of the operator.
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_weights(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for BilinOp {}

impl BilinOp {
    pub fn zero(ctx: OpContext) -> Self {
        BilinOp {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(ctx: OpContext, key: Key, coeff: Rat) -> Result<Self> {
        Self::from_terms(ctx, [(key, coeff)])
    }

    /// The multiplication operator `(F, G) |-> F G`.
    pub fn multiplication(ctx: OpContext) -> Self {
        Self::single(ctx, Key::classical(0, 0, 0), Rat::one()).expect("fits any context")
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, Rat)>>(ctx: OpContext, terms: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            if !ctx.key_fits(&k) {
                return Err(Error::Bounds(format!(
                    "key {k:?} exceeds bounds (order {}, xdeg {})",
                    ctx.max_order, ctx.max_xdeg
                )));
            }
            let e = map.entry(k).or_insert_with(Rat::zero);
            *e += &c;
            if e.is_zero() {
                map.remove(&k);
            }
        }
        Ok(BilinOp { ctx, terms: map })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &Key) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    /// Parity of the stored keys; `None` for the zero operator, an error
    /// when keys of both parities are present.
    pub fn parity_opt(&self) -> Result<Option<Parity>> {
        let mut found: Option<Parity> = None;
        for k in self.terms.keys() {
            match found {
                None => found = Some(k.parity()),
                Some(p) if p == k.parity() => {}
                Some(_) => {
                    return Err(Error::MixedParity("operator has keys of both parities".into()))
                }
            }
        }
        Ok(found)
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|k| k.parity() == p)
    }

    pub fn scale(&self, c: &Rat) -> BilinOp {
        if c.is_zero() {
            return BilinOp::zero(self.ctx.clone());
        }
        BilinOp {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &BilinOp) -> Result<BilinOp> {
        if !self.ctx.same_weights(&other.ctx) {
            return Err(Error::WeightMismatch {
                expected: format!("{:?}", (&self.ctx.lambda, &self.ctx.nu, &self.ctx.mu)),
                got: format!("{:?}", (&other.ctx.lambda, &other.ctx.nu, &other.ctx.mu)),
            });
        }
        let ctx = OpContext {
            max_order: self.ctx.max_order.max(other.ctx.max_order),
            max_xdeg: self.ctx.max_xdeg.max(other.ctx.max_xdeg),
            ..self.ctx.clone()
        };
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(*k).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Ok(BilinOp { ctx, terms })
    }

    pub fn sub(&self, other: &BilinOp) -> Result<BilinOp> {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Applies the operator to a pair of densities of the context weights.
    pub fn evaluate(&self, f: &Density, g: &Density) -> Result<Density> {
        if f.weight != self.ctx.lambda || g.weight != self.ctx.nu {
            return Err(Error::WeightMismatch {
                expected: format!("({}, {})", self.ctx.lambda, self.ctx.nu),
                got: format!("({}, {})", f.weight, g.weight),
            });
        }
        let mut acc = SuperFn::zero();
        for (k, c) in &self.terms {
            let mut leg1 = f.value.clone();
            if k.ef == 1 {
                leg1 = leg1.dtheta();
            }
            for _ in 0..k.i {
                leg1 = leg1.dx();
            }
            let mut leg2 = g.value.clone();
            if k.eg == 1 {
                leg2 = leg2.dtheta();
            }
            for _ in 0..k.j {
                leg2 = leg2.dx();
            }
            let pre = SuperFn::monomial(k.m as usize, k.tau == 1, Rat::one());
            let term = &(&pre * &leg1) * &leg2;
            acc = &acc + &term.scale(c);
        }
        Ok(Density::new(acc, self.ctx.mu.clone()))
    }

    /// Sorted term records, rationals as `p/q` strings under serde.
    pub fn records(&self) -> Vec<KeyRecord> {
        self.terms
            .iter()
            .map(|(k, c)| KeyRecord {
                m: k.m,
                tau: k.tau,
                i: k.i,
                ef: k.ef,
                j: k.j,
                eg: k.eg,
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_records(ctx: OpContext, records: &[KeyRecord]) -> Result<Self> {
        Self::from_terms(
            ctx,
            records
                .iter()
                .map(|r| (Key::new(r.m, r.tau, r.i, r.ef, r.j, r.eg), r.coeff.clone())),
        )
    }

    /// Splits an operator into its four classical component operators on
    /// the parity blocks of the source and target, in the slot order
    /// `[(even,even), (odd,odd), (even,odd), (odd,even)]` of the inputs.
    ///
    /// Each component is a theta-free operator between the shifted-weight
    /// classical modules; `reassemble` inverts the decomposition.
    pub fn decompose_components(&self) -> Result<(Parity, [BilinOp; 4])> {
        let p = self
            .parity_opt()?
            .ok_or_else(|| Error::MixedParity("cannot decompose the zero operator".into()))?;
        let half = Rat::half();
        let slot_ctx = |df: &Rat, dg: &Rat, dm: &Rat| OpContext {
            lambda: &self.ctx.lambda + df,
            nu: &self.ctx.nu + dg,
            mu: &self.ctx.mu + dm,
            ..self.ctx.clone()
        };
        // Input blocks (pf, pg); the target parity is forced by p.
        let blocks = [(0u8, 0u8), (1, 1), (0, 1), (1, 0)];
        let zero = Rat::zero();
        let mut out: Vec<BilinOp> = blocks
            .iter()
            .map(|&(pf, pg)| {
                let df = if pf == 1 { &half } else { &zero };
                let dg = if pg == 1 { &half } else { &zero };
                // target picks up theta exactly when input and operator
                // parities demand it
                let t_out = (pf + pg + p.as_u8()) % 2;
                let dm = if t_out == 1 { &half } else { &zero };
                BilinOp::zero(slot_ctx(df, dg, dm))
            })
            .collect();
        for (k, c) in &self.terms {
            for (slot, &(pf, pg)) in blocks.iter().enumerate() {
                if k.ef > pf || k.eg > pg {
                    continue;
                }
                let t_theta = k.tau + (pf - k.ef) + (pg - k.eg);
                if t_theta > 1 {
                    continue;
                }
                let ck = Key::classical(k.m, k.i, k.j);
                let e = out[slot].terms.entry(ck).or_insert_with(Rat::zero);
                *e += c;
                if e.is_zero() {
                    out[slot].terms.remove(&ck);
                }
            }
        }
        let arr: [BilinOp; 4] = out.try_into().expect("four slots");
        Ok((p, arr))
    }

    /// Rebuilds a super operator of the stated parity from its four
    /// classical components.
    pub fn reassemble(parity: Parity, ctx: OpContext, comps: &[BilinOp; 4]) -> Result<BilinOp> {
        let mut terms: Vec<(Key, Rat)> = Vec::new();
        let [c00, c11, c01, c10] = comps;
        let union = |a: &BilinOp, b: &BilinOp| -> std::collections::BTreeSet<Key> {
            a.terms.keys().chain(b.terms.keys()).copied().collect()
        };
        match parity {
            Parity::Even => {
                for (k, c) in &c00.terms {
                    terms.push((Key::new(k.m, 0, k.i, 0, k.j, 0), c.clone()));
                }
                for (k, c) in &c11.terms {
                    terms.push((Key::new(k.m, 0, k.i, 1, k.j, 1), c.clone()));
                }
                for k in union(c01, c00) {
                    let c = &c01.coeff(&k) - &c00.coeff(&k);
                    terms.push((Key::new(k.m, 1, k.i, 0, k.j, 1), c));
                }
                for k in union(c10, c00) {
                    let c = &c10.coeff(&k) - &c00.coeff(&k);
                    terms.push((Key::new(k.m, 1, k.i, 1, k.j, 0), c));
                }
            }
            Parity::Odd => {
                for (k, c) in &c00.terms {
                    terms.push((Key::new(k.m, 1, k.i, 0, k.j, 0), c.clone()));
                }
                for (k, c) in &c10.terms {
                    terms.push((Key::new(k.m, 0, k.i, 1, k.j, 0), c.clone()));
                }
                for (k, c) in &c01.terms {
                    terms.push((Key::new(k.m, 0, k.i, 0, k.j, 1), c.clone()));
                }
                // block11 sees both single-eps keys plus the full key
                let mut keys: std::collections::BTreeSet<Key> = c11.terms.keys().copied().collect();
                keys.extend(c10.terms.keys().copied());
                keys.extend(c01.terms.keys().copied());
                for k in keys {
                    let c = &(&c11.coeff(&k) - &c10.coeff(&k)) - &c01.coeff(&k);
                    terms.push((Key::new(k.m, 1, k.i, 1, k.j, 1), c));
                }
            }
        }
        BilinOp::from_terms(ctx, terms)
    }
}

impl fmt::Display for BilinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("{c}*");
                if k.m > 0 {
                    s.push_str(&format!("x^{}*", k.m));
                }
                if k.tau == 1 {
                    s.push_str("theta*");
                }
                s.push_str(&format!("D[{},{}]F*D[{},{}]G", k.i, k.ef, k.j, k.eg));
                s
            })
            .collect();
        write!(f, "{}", strs.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ctx(l: Rat, n: Rat, m: Rat) -> OpContext {
        OpContext::new(l, n, m, 4, 4)
    }

    fn dens(s: &str, w: Rat) -> Density {
        Density::new(s.parse().unwrap(), w)
    }

    #[test]
    fn evaluate_examples() {
        let c = ctx(rat!(0), rat!(0), rat!(0));
        let mult = BilinOp::multiplication(c.clone());
        assert_eq!(
            mult.evaluate(&dens("x", rat!(0)), &dens("x^2", rat!(0)))
                .unwrap()
                .value,
            "x^3".parse().unwrap()
        );

        let d1 = BilinOp::single(c.clone(), Key::classical(0, 1, 0), rat!(1)).unwrap();
        assert_eq!(
            d1.evaluate(&dens("x^2", rat!(0)), &dens("x^4", rat!(0)))
                .unwrap()
                .value,
            "2*x^5".parse().unwrap()
        );

        let dd = BilinOp::single(c, Key::new(0, 1, 0, 1, 0, 1), rat!(1)).unwrap();
        assert_eq!(
            dd.evaluate(&dens("theta", rat!(0)), &dens("theta", rat!(0)))
                .unwrap()
                .value,
            "theta".parse().unwrap()
        );
    }

    #[test]
    fn weight_mismatch_rejected() {
        let c = ctx(rat!(1, 2), rat!(0), rat!(1, 2));
        let mult = BilinOp::multiplication(c);
        assert!(mult
            .evaluate(&dens("x", rat!(0)), &dens("x", rat!(0)))
            .is_err());
    }

    #[test]
    fn key_weights() {
        let c = ctx(rat!(0), rat!(0), rat!(0));
        assert_eq!(weight_of_key(&c, &Key::classical(0, 0, 0)), rat!(0));
        assert_eq!(weight_of_key(&c, &Key::classical(1, 2, 0)), rat!(-1));
        assert_eq!(weight_of_key(&c, &Key::new(0, 1, 0, 0, 0, 0)), rat!(1, 2));
        let c = ctx(rat!(1, 2), rat!(1, 2), rat!(3));
        assert_eq!(weight_of_key(&c, &Key::new(0, 0, 1, 1, 0, 0)), rat!(1, 2));
    }

    #[test]
    fn multiplication_components() {
        // theta^2 = 0 kills the odd-odd block of the product.
        let c = ctx(rat!(1, 3), rat!(2, 5), rat!(1));
        let mult = BilinOp::multiplication(c.clone());
        let (p, comps) = mult.decompose_components().unwrap();
        assert_eq!(p, Parity::Even);
        assert_eq!(comps[0], BilinOp::multiplication(comps[0].ctx.clone()));
        assert!(comps[1].is_zero());
        assert_eq!(comps[2], BilinOp::multiplication(comps[2].ctx.clone()));
        assert_eq!(comps[3], BilinOp::multiplication(comps[3].ctx.clone()));
        let back = BilinOp::reassemble(p, c, &comps).unwrap();
        assert_eq!(back, mult);
    }

    #[test]
    fn odd_single_theta_key_component() {
        // (F, G) |-> theta f0 g0 has exactly one component, in the
        // (even, even) -> odd slot.
        let c = ctx(rat!(0), rat!(0), rat!(1, 2));
        let a = BilinOp::single(c, Key::new(0, 1, 0, 0, 0, 0), rat!(1)).unwrap();
        let (p, comps) = a.decompose_components().unwrap();
        assert_eq!(p, Parity::Odd);
        assert!(!comps[0].is_zero());
        assert!(comps[1].is_zero() && comps[2].is_zero() && comps[3].is_zero());
        assert_eq!(comps[0].ctx.mu, rat!(1));
    }

    #[test]
    fn decompose_reassemble_round_trip() {
        // spanning set: every key of each parity in a small context
        let c = OpContext::new(rat!(1, 2), rat!(-1, 3), rat!(2), 2, 2);
        for parity in [Parity::Even, Parity::Odd] {
            let mut keys = vec![];
            for m in 0..=2u32 {
                for tau in 0..=1u8 {
                    for ef in 0..=1u8 {
                        for eg in 0..=1u8 {
                            for i in 0..=2u32 {
                                for j in 0..=2u32 {
                                    let k = Key::new(m, tau, i, ef, j, eg);
                                    if k.parity() == parity && c.key_fits(&k) {
                                        keys.push(k);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // a generic combination with distinct coefficients
            let op = BilinOp::from_terms(
                c.clone(),
                keys.iter()
                    .enumerate()
                    .map(|(n, k)| (*k, rat!(n as i64 + 1, 3))),
            )
            .unwrap();
            let (p, comps) = op.decompose_components().unwrap();
            assert_eq!(p, parity);
            let back = BilinOp::reassemble(p, c.clone(), &comps).unwrap();
            assert_eq!(back, op);
        }
    }

    #[test]
    fn decompose_matches_block_evaluation() {
        // Component evaluation agrees with evaluating the super operator
        // on split monomial pairs of degree <= 4.
        let c = OpContext::new(rat!(1, 2), rat!(-1, 3), rat!(2), 2, 2);
        let op = BilinOp::from_terms(
            c.clone(),
            [
                (Key::new(0, 0, 1, 0, 1, 0), rat!(2)),
                (Key::new(1, 0, 0, 1, 0, 1), rat!(-1, 2)),
                (Key::new(0, 1, 0, 0, 1, 1), rat!(5, 3)),
                (Key::new(2, 1, 2, 1, 0, 0), rat!(7)),
            ],
        )
        .unwrap();
        let (_, comps) = op.decompose_components().unwrap();
        for df in 0..=4usize {
            for dg in 0..=4usize {
                for (pf, pg, slot) in [(0, 0, 0), (1, 1, 1), (0, 1, 2), (1, 0, 3)] {
                    let f = Density::new(SuperFn::monomial(df, pf == 1, rat!(1)), c.lambda.clone());
                    let g = Density::new(SuperFn::monomial(dg, pg == 1, rat!(1)), c.nu.clone());
                    let full = op.evaluate(&f, &g).unwrap().value;
                    let comp = &comps[slot];
                    let fc = Density::new(
                        SuperFn::monomial(df, false, rat!(1)),
                        comp.ctx.lambda.clone(),
                    );
                    let gc =
                        Density::new(SuperFn::monomial(dg, false, rat!(1)), comp.ctx.nu.clone());
                    let got = comp.evaluate(&fc, &gc).unwrap().value;
                    // strip the theta wrapper from the super value
                    let expect = if full.odd.is_zero() {
                        full.even.clone()
                    } else {
                        assert!(full.even.is_zero(), "block value must be homogeneous");
                        full.odd.clone()
                    };
                    assert_eq!(got.even, expect, "block ({pf},{pg}) at ({df},{dg})");
                    assert!(got.odd.is_zero());
                }
            }
        }
    }
}
