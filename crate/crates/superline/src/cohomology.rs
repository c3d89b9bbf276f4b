//! Chevalley-Eilenberg cochains in degrees 0 and 1 with values in the
//! operator modules, their coboundaries, and the exact dimension engine
//! for the first cohomology of osp(1|2) and sl(2).
//!
//! Conventions, for `v` a 0-cochain and `c` a 1-cochain:
//!
//! ```text
//! (delta v)(g)    = (-1)^{p(g)p(v)} g.v
//! (delta c)(g, h) = (-1)^{p(g)p(c)} g.c(h)
//!                   - (-1)^{p(h)(p(g)+p(c))} h.c(g) - c([g, h])
//! ```
//!
//! The engine works block by block under the grading induced by `X_x`:
//! the coboundary commutes with the grading, and on a block of nonzero
//! weight `w` every cocycle `z` is `delta(z(X_x))/w`, so cohomology is
//! carried by the weight-zero block. The default pipeline computes that
//! block; the full sweep runs every block of the truncation and checks
//! the others cancel, which is the slow cross-check path.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::biop::{weight_of_key, BilinOp, Key, KeyRecord, OpContext};
use crate::error::{Error, Result};
use crate::jet::{act, act_classical};
use crate::liealg::{expand_in_basis, Gen};
use crate::linalg::{solve_span, svec_axpy, Echelon, LinSystem, SVec};
use crate::scalar::Rat;
use crate::superfield::Parity;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraMode {
    /// osp(1|2) acting on the super operator module.
    Osp,
    /// sl(2) acting on the theta-free classical module.
    Sl2,
}

impl AlgebraMode {
    pub fn generators(self) -> &'static [Gen] {
        match self {
            AlgebraMode::Osp => &Gen::ALL,
            AlgebraMode::Sl2 => &Gen::SL2,
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, AlgebraMode::Sl2)
    }
}

/// Unordered generator pairs carrying the degree-2 components: distinct
/// even pairs plus all pairs involving odd generators, diagonals included.
pub fn pairs(mode: AlgebraMode) -> Vec<(Gen, Gen)> {
    let gens = mode.generators();
    let mut out = Vec::new();
    for (a, &g) in gens.iter().enumerate() {
        for &h in &gens[a..] {
            if g == h && g.parity() == Parity::Even {
                continue;
            }
            out.push((g, h));
        }
    }
    out
}


fn act_in(mode: AlgebraMode, x: &Gen, a: &BilinOp) -> Result<BilinOp> {
    if mode.is_classical() {
        act_classical(&x.field(), a)
    } else {
        act(&x.field(), a)
    }
}

/// A 1-cochain: one operator value per generator, with
/// `parity(value(g)) = parity(c) + |g|`.
#[derive(Clone, PartialEq, Debug)]
pub struct Cochain1 {
    pub ctx: OpContext,
    pub parity: Parity,
    pub mode: AlgebraMode,
    vals: Vec<BilinOp>,
}

impl Cochain1 {
    pub fn zero(ctx: OpContext, parity: Parity, mode: AlgebraMode) -> Self {
        let vals = mode
            .generators()
            .iter()
            .map(|_| BilinOp::zero(ctx.clone()))
            .collect();
        Cochain1 {
            ctx,
            parity,
            mode,
            vals,
        }
    }

    pub fn from_values(
        ctx: OpContext,
        parity: Parity,
        mode: AlgebraMode,
        vals: Vec<BilinOp>,
    ) -> Result<Self> {
        if vals.len() != mode.generators().len() {
            return Err(Error::Internal("one value per generator".into()));
        }
        for (g, v) in mode.generators().iter().zip(&vals) {
            if !v.ctx.same_weights(&ctx) {
                return Err(Error::WeightMismatch {
                    expected: format!("({}, {}, {})", ctx.lambda, ctx.nu, ctx.mu),
                    got: format!("({}, {}, {})", v.ctx.lambda, v.ctx.nu, v.ctx.mu),
                });
            }
            let want = parity.add(g.parity());
            if !v.has_parity(want) {
                return Err(Error::ParityMismatch(format!(
                    "value on {} must have parity {want}",
                    g.name()
                )));
            }
        }
        Ok(Cochain1 {
            ctx,
            parity,
            mode,
            vals,
        })
    }

    /// The basis cochain supported on one generator with one key.
    pub fn basis(ctx: OpContext, mode: AlgebraMode, gen: Gen, key: Key) -> Result<Self> {
        let parity = key.parity().add(gen.parity());
        let mut c = Cochain1::zero(ctx.clone(), parity, mode);
        c.vals[Self::slot(mode, gen)] = BilinOp::single(ctx, key, Rat::one())?;
        Ok(c)
    }

    fn slot(mode: AlgebraMode, gen: Gen) -> usize {
        let s = gen.index();
        debug_assert!(s < mode.generators().len(), "generator outside the mode");
        s
    }

    pub fn value(&self, gen: Gen) -> &BilinOp {
        &self.vals[Self::slot(self.mode, gen)]
    }

    pub fn set_value(&mut self, gen: Gen, op: BilinOp) -> Result<()> {
        let want = self.parity.add(gen.parity());
        if !op.has_parity(want) {
            return Err(Error::ParityMismatch(format!(
                "value on {} must have parity {want}",
                gen.name()
            )));
        }
        self.vals[Self::slot(self.mode, gen)] = op;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(BilinOp::is_zero)
    }

    pub fn scale(&self, s: &Rat) -> Cochain1 {
        Cochain1 {
            ctx: self.ctx.clone(),
            parity: self.parity,
            mode: self.mode,
            vals: self.vals.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Cochain1) -> Result<Cochain1> {
        if self.parity != other.parity || self.mode != other.mode {
            return Err(Error::ParityMismatch(
                "cochain sum needs matching parity and mode".into(),
            ));
        }
        let vals = self
            .vals
            .iter()
            .zip(&other.vals)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        let ctx = vals
            .first()
            .map(|v: &BilinOp| v.ctx.clone())
            .unwrap_or_else(|| self.ctx.clone());
        Ok(Cochain1 {
            ctx,
            parity: self.parity,
            mode: self.mode,
            vals,
        })
    }

    pub fn sub(&self, other: &Cochain1) -> Result<Cochain1> {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Value on an arbitrary algebra element expanded in the basis.
    fn value_on_combination(&self, coeffs: &[Rat; 5], ctx: &OpContext) -> Result<BilinOp> {
        let mut acc = BilinOp::zero(ctx.clone());
        for (g, c) in Gen::ALL.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            if g.index() >= self.vals.len() {
                return Err(Error::Internal(format!(
                    "bracket leaves the {:?} span",
                    self.mode
                )));
            }
            acc = acc.add(&self.value(*g).scale(c))?;
        }
        Ok(acc)
    }

    pub fn to_record(&self) -> CochainRecord {
        CochainRecord {
            parity: self.parity.to_string(),
            values: self
                .mode
                .generators()
                .iter()
                .map(|g| GeneratorValue {
                    generator: g.name().to_string(),
                    terms: self.value(*g).records(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorValue {
    pub generator: String,
    pub terms: Vec<KeyRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainRecord {
    pub parity: String,
    pub values: Vec<GeneratorValue>,
}

/// Degree-2 data over the unordered pairs.
#[derive(Clone, Debug)]
pub struct PairTable {
    pub mode: AlgebraMode,
    pub entries: Vec<((Gen, Gen), BilinOp)>,
}

impl PairTable {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|(_, v)| !v.is_zero()).count()
    }

    pub fn entry(&self, g: Gen, h: Gen) -> Option<&BilinOp> {
        self.entries
            .iter()
            .find(|((a, b), _)| (*a, *b) == (g, h))
            .map(|(_, v)| v)
    }
}

/// `(delta v)(g) = (-1)^{p(g)p(v)} g.v`.
pub fn delta0(v: &BilinOp, mode: AlgebraMode) -> Result<Cochain1> {
    let pv = v.parity_opt()?.unwrap_or(Parity::Even);
    let mut vals = Vec::new();
    let mut out_ctx = None;
    for g in mode.generators() {
        let sign = Parity::koszul(g.parity(), pv);
        let acted = act_in(mode, g, v)?.scale(&sign);
        out_ctx.get_or_insert_with(|| acted.ctx.clone());
        vals.push(acted);
    }
    Cochain1 {
        ctx: out_ctx.expect("nonempty generator list"),
        parity: pv,
        mode,
        vals,
    }
    .validate()
}

impl Cochain1 {
    fn validate(self) -> Result<Cochain1> {
        for (g, v) in self.mode.generators().iter().zip(&self.vals) {
            if !v.has_parity(self.parity.add(g.parity())) {
                return Err(Error::ParityMismatch(format!(
                    "inconsistent parity on {}",
                    g.name()
                )));
            }
        }
        Ok(self)
    }
}

/// The coboundary of a 1-cochain over all pairs; values live in a context
/// with one extra unit of x-degree and order headroom.
pub fn delta1(c: &Cochain1) -> Result<PairTable> {
    let mut entries = Vec::new();
    let mut target_ctx: Option<OpContext> = None;
    for (g, h) in pairs(c.mode) {
        let sign_g = Parity::koszul(g.parity(), c.parity);
        let sign_h = Parity::koszul(h.parity(), g.parity().add(c.parity));
        let t1 = act_in(c.mode, &g, c.value(h))?.scale(&sign_g);
        let t2 = act_in(c.mode, &h, c.value(g))?.scale(&sign_h);
        let ctx = target_ctx.get_or_insert_with(|| t1.ctx.clone());
        let bracket = crate::superfield::contact_bracket(&g.hamiltonian(), &h.hamiltonian());
        let cb = c.value_on_combination(&expand_in_basis(&bracket)?, ctx)?;
        let entry = t1.sub(&t2)?.sub(&cb)?;
        entries.push(((g, h), entry));
    }
    Ok(PairTable {
        mode: c.mode,
        entries,
    })
}

/// `X_x . c(.) - c([X_x, .])`; diagonal on the canonical cochain basis.
pub fn grading_operator(c: &Cochain1) -> Result<Cochain1> {
    let mut vals = Vec::new();
    let mut out_ctx = None;
    for g in c.mode.generators() {
        let acted = act_in(c.mode, &Gen::X, c.value(*g))?;
        let adjusted = acted.sub(&c.value(*g).scale(&g.ad_x_weight()))?;
        out_ctx.get_or_insert_with(|| adjusted.ctx.clone());
        vals.push(adjusted);
    }
    Cochain1 {
        ctx: out_ctx.expect("nonempty generator list"),
        parity: c.parity,
        mode: c.mode,
        vals,
    }
    .validate()
}

/// Grading eigenvalue of the basis cochain `(gen, key)`.
pub fn cochain_weight(ctx: &OpContext, gen: Gen, key: &Key) -> Rat {
    &weight_of_key(ctx, key) - &gen.ad_x_weight()
}

// ---------------------------------------------------------------------------
// Basis enumeration
// ---------------------------------------------------------------------------

/// Keys of the given parity in a context, optionally pinned to a fixed
/// `weight_of_key` value. Pinning fixes `i + j`, so enumeration is linear.
fn keys_with(
    ctx: &OpContext,
    parity: Parity,
    classical: bool,
    weight: Option<&Rat>,
) -> Vec<Key> {
    let mut out = Vec::new();
    let eps_combos: &[(u8, u8, u8)] = if classical {
        &[(0, 0, 0)]
    } else {
        &[
            (0, 0, 0),
            (0, 0, 1),
            (0, 1, 0),
            (0, 1, 1),
            (1, 0, 0),
            (1, 0, 1),
            (1, 1, 0),
            (1, 1, 1),
        ]
    };
    for m in 0..=(ctx.max_xdeg as u32) {
        for &(tau, ef, eg) in eps_combos {
            if Parity::from_u8(tau + ef + eg) != parity {
                continue;
            }
            let top = 2 * ctx.max_order as i64 - (ef + eg) as i64;
            if top < 0 {
                continue;
            }
            match weight {
                Some(w) => {
                    // i + j = delta + m + (tau - ef - eg)/2 - w
                    let half = Rat::new(tau as i64 - ef as i64 - eg as i64, 2);
                    let total = &(&(&ctx.delta() + &Rat::from(m as i64)) + &half) - w;
                    let Some(l) = total.to_i64() else { continue };
                    if l < 0 || l > top {
                        continue;
                    }
                    for i in 0..=l {
                        out.push(Key::new(m, tau, i as u32, ef, (l - i) as u32, eg));
                    }
                }
                None => {
                    for l in 0..=top {
                        for i in 0..=l {
                            out.push(Key::new(m, tau, i as u32, ef, (l - i) as u32, eg));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Sorted `(generator slot, key)` coordinates of the weight-`w` part of the
/// sector's 1-cochain space.
fn cochain_coords(
    ctx: &OpContext,
    sector: Parity,
    mode: AlgebraMode,
    weight: Option<&Rat>,
    gens: &[Gen],
) -> Vec<(usize, Key)> {
    let mut out = Vec::new();
    for g in gens {
        let kp = sector.add(g.parity());
        let key_weight = weight.map(|w| w + &g.ad_x_weight());
        for k in keys_with(ctx, kp, mode.is_classical(), key_weight.as_ref()) {
            out.push((g.index(), k));
        }
    }
    out.sort();
    out
}

fn index_map(coords: &[(usize, Key)]) -> BTreeMap<(usize, Key), u32> {
    coords
        .iter()
        .enumerate()
        .map(|(n, c)| (*c, n as u32))
        .collect()
}

// ---------------------------------------------------------------------------
// The dimension engine
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct H1Options {
    pub mode: AlgebraMode,
    /// Compute the sl(2)-relative cohomology of osp(1|2).
    pub relative: bool,
    pub order: Option<usize>,
    pub xdeg: Option<usize>,
    /// Run every grading block instead of only weight zero.
    pub full_weight_sweep: bool,
    /// Force the parity sector (used to verify the opposite sector dies).
    pub sector: Option<Parity>,
    pub order_ceiling: usize,
    pub xdeg_ceiling: usize,
    pub with_basis: bool,
}

impl Default for H1Options {
    fn default() -> Self {
        H1Options {
            mode: AlgebraMode::Osp,
            relative: false,
            order: None,
            xdeg: None,
            full_weight_sweep: false,
            sector: None,
            order_ceiling: 12,
            xdeg_ceiling: 6,
            with_basis: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct H1Result {
    pub lambda: Rat,
    pub nu: Rat,
    pub mu: Rat,
    pub dim: usize,
    /// Parity of the nonzero space; `None` when the dimension is zero.
    pub parity: Option<Parity>,
    pub stabilized: bool,
    pub order: usize,
    pub xdeg: usize,
    pub basis: Vec<Cochain1>,
    /// True when the integrality guard short-circuited the computation.
    pub guarded: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct H1Record {
    pub lambda: Rat,
    pub nu: Rat,
    pub mu: Rat,
    pub parity: String,
    pub dim: usize,
    pub stabilized: bool,
    pub order: usize,
    pub xdeg: usize,
    pub basis: Vec<CochainRecord>,
}

impl H1Result {
    pub fn to_record(&self) -> H1Record {
        H1Record {
            lambda: self.lambda.clone(),
            nu: self.nu.clone(),
            mu: self.mu.clone(),
            parity: match self.parity {
                Some(p) => p.to_string(),
                None => "zero".into(),
            },
            dim: self.dim,
            stabilized: self.stabilized,
            order: self.order,
            xdeg: self.xdeg,
            basis: self.basis.iter().map(Cochain1::to_record).collect(),
        }
    }
}

/// Default truncation order for a weight difference `delta`:
/// `max(2, ceil(2 delta) + 3)`.
fn default_order(delta: &Rat) -> usize {
    use num_traits::ToPrimitive;
    let two_delta = (delta + delta).ceil_int().to_i64().unwrap_or(0);
    (two_delta + 3).max(2) as usize
}

/// Dimension of the first cohomology at `(lambda, nu, mu)`.
pub fn dim_h1(lambda: &Rat, nu: &Rat, mu: &Rat, opts: &H1Options) -> Result<H1Result> {
    let delta = &(mu - lambda) - nu;
    let zero_result = |order, xdeg, guarded| H1Result {
        lambda: lambda.clone(),
        nu: nu.clone(),
        mu: mu.clone(),
        dim: 0,
        parity: None,
        stabilized: true,
        order,
        xdeg,
        basis: Vec::new(),
        guarded,
    };

    // nonzero spaces need 2 delta to be an integer >= -1 (classical: a
    // natural number); everything else dies without assembling a matrix
    let guard_ok = match opts.mode {
        AlgebraMode::Sl2 => delta.is_natural(),
        AlgebraMode::Osp => {
            delta.is_half_integer() && (&delta + &Rat::half()) >= Rat::zero()
        }
    };
    if !guard_ok && opts.sector.is_none() {
        return Ok(zero_result(0, 0, true));
    }

    let sector = opts.sector.unwrap_or(if delta.is_integer() {
        Parity::Even
    } else {
        Parity::Odd
    });

    let mut n = opts.order.unwrap_or_else(|| default_order(&delta));
    let mut d = opts.xdeg.unwrap_or(3);

    let mut prev = run_truncation(lambda, nu, mu, n, d, sector, opts)?;
    loop {
        let next = run_truncation(lambda, nu, mu, n + 1, d + 1, sector, opts)?;
        if next.0 == prev.0 {
            let (dim, basis) = prev;
            return Ok(H1Result {
                lambda: lambda.clone(),
                nu: nu.clone(),
                mu: mu.clone(),
                dim,
                parity: if dim > 0 { Some(sector) } else { None },
                stabilized: true,
                order: n,
                xdeg: d,
                basis,
                guarded: false,
            });
        }
        n += 1;
        d += 1;
        prev = next;
        if n >= opts.order_ceiling || d >= opts.xdeg_ceiling {
            let (dim, basis) = prev;
            return Ok(H1Result {
                lambda: lambda.clone(),
                nu: nu.clone(),
                mu: mu.clone(),
                dim,
                parity: if dim > 0 { Some(sector) } else { None },
                stabilized: false,
                order: n,
                xdeg: d,
                basis,
                guarded: false,
            });
        }
    }
}

fn run_truncation(
    lambda: &Rat,
    nu: &Rat,
    mu: &Rat,
    n: usize,
    d: usize,
    sector: Parity,
    opts: &H1Options,
) -> Result<(usize, Vec<Cochain1>)> {
    let ctx = OpContext::new(lambda.clone(), nu.clone(), mu.clone(), n, d);
    let gens: Vec<Gen> = if opts.relative {
        vec![Gen::Theta, Gen::XTheta]
    } else {
        opts.mode.generators().to_vec()
    };

    let weights: Vec<Rat> = if opts.full_weight_sweep {
        let mut seen = std::collections::BTreeSet::new();
        for (slot, key) in cochain_coords(&ctx, sector, opts.mode, None, &gens) {
            let g = Gen::ALL[slot];
            seen.insert(cochain_weight(&ctx, g, &key));
        }
        seen.into_iter().collect()
    } else {
        vec![Rat::zero()]
    };

    let mut dim = 0;
    let mut basis = Vec::new();
    for w in &weights {
        let (bd, mut breps) = compute_block(&ctx, sector, w, &gens, opts)?;
        dim += bd;
        basis.append(&mut breps);
    }
    Ok((dim, basis))
}

/// One grading block: cocycles minus coboundaries at weight `w`.
fn compute_block(
    ctx: &OpContext,
    sector: Parity,
    w: &Rat,
    gens: &[Gen],
    opts: &H1Options,
) -> Result<(usize, Vec<Cochain1>)> {
    let mode = opts.mode;
    let cols = cochain_coords(ctx, sector, mode, Some(w), gens);
    if cols.is_empty() {
        return Ok((0, Vec::new()));
    }
    let col_index = index_map(&cols);

    // --- cocycles: nullspace of delta1 over the block columns
    let relevant_pairs: Vec<(Gen, Gen)> = pairs(mode)
        .into_iter()
        .filter(|(g, h)| {
            if !opts.relative {
                return true;
            }
            // with values pinned to the odd part, even-even entries vanish
            // identically
            !(g.parity() == Parity::Even && h.parity() == Parity::Even)
        })
        .collect();
    let pair_slot: BTreeMap<(Gen, Gen), usize> = relevant_pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, i))
        .collect();

    let mut equations: BTreeMap<(usize, Key), SVec> = BTreeMap::new();
    for (cidx, (slot, key)) in cols.iter().enumerate() {
        let cochain = Cochain1::basis(ctx.clone(), mode, Gen::ALL[*slot], *key)?;
        let table = relative_delta1(&cochain, &relevant_pairs, opts.relative)?;
        for ((g, h), val) in &table {
            let ps = pair_slot[&(*g, *h)];
            for (k, coeff) in val.terms() {
                equations
                    .entry((ps, *k))
                    .or_default()
                    .push((cidx as u32, coeff.clone()));
            }
        }
    }
    let rows: Vec<SVec> = equations.into_values().collect();
    let zvecs = LinSystem {
        ncols: cols.len() as u32,
        rows,
    }
    .nullspace();
    if zvecs.is_empty() {
        return Ok((0, Vec::new()));
    }

    // --- coboundaries landing inside the block
    let c0_ctx = OpContext {
        max_order: ctx.max_order + 1,
        max_xdeg: ctx.max_xdeg + 2,
        ..ctx.clone()
    };
    let c0_keys = c0_basis_keys(&c0_ctx, sector, mode, w, opts.relative)?;

    let mut images: Vec<(SVec, SVec)> = Vec::new(); // (inside, outside)
    let mut outside_index: BTreeMap<(usize, Key), u32> = BTreeMap::new();
    for v in &c0_keys {
        let dv = delta0(v, mode)?;
        let mut inside: SVec = Vec::new();
        let mut outside: SVec = Vec::new();
        for g in gens {
            for (k, coeff) in dv.value(*g).terms() {
                let coord = (g.index(), *k);
                if let Some(ci) = col_index.get(&coord) {
                    inside.push((*ci, coeff.clone()));
                } else {
                    let next = outside_index.len() as u32;
                    let oi = *outside_index.entry(coord).or_insert(next);
                    outside.push((oi, coeff.clone()));
                }
            }
        }
        inside.sort_by_key(|(i, _)| *i);
        outside.sort_by_key(|(i, _)| *i);
        images.push((inside, outside));
    }

    // combinations whose image stays inside the truncated space
    let out_rows: Vec<SVec> = {
        let mut rows: BTreeMap<u32, SVec> = BTreeMap::new();
        for (b, (_, outside)) in images.iter().enumerate() {
            for (oi, coeff) in outside {
                rows.entry(*oi).or_default().push((b as u32, coeff.clone()));
            }
        }
        rows.into_values().collect()
    };
    let inside_combos = LinSystem {
        ncols: images.len() as u32,
        rows: out_rows,
    }
    .nullspace();

    let mut b_ech = Echelon::new();
    for u in &inside_combos {
        let mut vec: SVec = Vec::new();
        for (b, coeff) in u {
            vec = svec_axpy(&vec, coeff, &images[*b as usize].0);
        }
        b_ech.insert(vec);
    }
    let bdim = b_ech.rank();

    let zdim = zvecs.len();
    if std::env::var_os("SUPERLINE_DEBUG_BLOCKS").is_some() {
        eprintln!(
            "block w={w}: cols={} zdim={zdim} bdim={bdim} c0={}",
            cols.len(),
            c0_keys.len()
        );
    }
    debug_assert!(bdim <= zdim, "coboundaries must be cocycles");
    let dim = zdim.saturating_sub(bdim);

    let mut reps = Vec::new();
    if opts.with_basis && dim > 0 {
        let mut ech = b_ech;
        for z in &zvecs {
            if ech.insert(z.clone()) {
                reps.push(svec_to_cochain(ctx, sector, mode, &cols, z)?);
                if reps.len() == dim {
                    break;
                }
            }
        }
    }
    Ok((dim, reps))
}

/// delta1 restricted to the listed pairs; in relative mode the cochain
/// vanishes on sl(2) by construction.
fn relative_delta1(
    c: &Cochain1,
    relevant: &[(Gen, Gen)],
    _relative: bool,
) -> Result<Vec<((Gen, Gen), BilinOp)>> {
    let full = delta1(c)?;
    Ok(full
        .entries
        .into_iter()
        .filter(|(p, _)| relevant.contains(p))
        .collect())
}

/// C0 basis of the block: single keys for the absolute case, a basis of
/// the sl(2)-invariant subspace for the relative case.
fn c0_basis_keys(
    c0_ctx: &OpContext,
    sector: Parity,
    mode: AlgebraMode,
    w: &Rat,
    relative: bool,
) -> Result<Vec<BilinOp>> {
    let keys = keys_with(c0_ctx, sector, mode.is_classical(), Some(w));
    let singles: Vec<BilinOp> = keys
        .iter()
        .map(|k| BilinOp::single(c0_ctx.clone(), *k, Rat::one()))
        .collect::<Result<Vec<_>>>()?;
    if !relative {
        return Ok(singles);
    }
    // relative 0-cochains are the sl(2)-invariant operators
    let mut rows: BTreeMap<(usize, Key), SVec> = BTreeMap::new();
    for (ci, v) in singles.iter().enumerate() {
        for (gi, g) in Gen::SL2.iter().enumerate() {
            let acted = act(&g.field(), v)?;
            for (k, coeff) in acted.terms() {
                rows.entry((gi, *k))
                    .or_default()
                    .push((ci as u32, coeff.clone()));
            }
        }
    }
    let invariants = LinSystem {
        ncols: singles.len() as u32,
        rows: rows.into_values().collect(),
    }
    .nullspace();
    invariants
        .iter()
        .map(|u| {
            let mut acc = BilinOp::zero(c0_ctx.clone());
            for (i, coeff) in u {
                acc = acc.add(&singles[*i as usize].scale(coeff))?;
            }
            Ok(acc)
        })
        .collect()
}

fn svec_to_cochain(
    ctx: &OpContext,
    sector: Parity,
    mode: AlgebraMode,
    cols: &[(usize, Key)],
    v: &SVec,
) -> Result<Cochain1> {
    let mut per_gen: BTreeMap<usize, Vec<(Key, Rat)>> = BTreeMap::new();
    for (ci, coeff) in v {
        let (slot, key) = cols[*ci as usize];
        per_gen.entry(slot).or_default().push((key, coeff.clone()));
    }
    let mut c = Cochain1::zero(ctx.clone(), sector, mode);
    for (slot, terms) in per_gen {
        c.set_value(Gen::ALL[slot], BilinOp::from_terms(ctx.clone(), terms)?)?;
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Triviality
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum Triviality {
    Trivial { witness: BilinOp },
    NonTrivial,
}

/// Decides whether a cocycle is a coboundary by solving `delta0(v) = c`
/// exactly; headroom is bumped once before concluding nontriviality.
pub fn is_trivial(c: &Cochain1) -> Result<Triviality> {
    let residual = delta1(c)?;
    if !residual.is_zero() {
        return Err(Error::NotACocycle(residual.nonzero_count()));
    }
    if c.is_zero() {
        return Ok(Triviality::Trivial {
            witness: BilinOp::zero(c.ctx.clone()),
        });
    }
    for extra in [2usize, 3] {
        if let Some(witness) = try_witness(c, extra)? {
            return Ok(Triviality::Trivial { witness });
        }
    }
    Ok(Triviality::NonTrivial)
}

fn try_witness(c: &Cochain1, extra_xdeg: usize) -> Result<Option<BilinOp>> {
    // group the cochain coordinates by grading weight; each weight block
    // solves independently
    let mut by_weight: BTreeMap<Rat, Vec<(usize, Key, Rat)>> = BTreeMap::new();
    for g in c.mode.generators() {
        for (k, coeff) in c.value(*g).terms() {
            by_weight
                .entry(cochain_weight(&c.ctx, *g, k))
                .or_default()
                .push((g.index(), *k, coeff.clone()));
        }
    }
    let c0_ctx = OpContext {
        max_order: c.ctx.max_order + 1 + extra_xdeg,
        max_xdeg: c.ctx.max_xdeg + extra_xdeg,
        ..c.ctx.clone()
    };
    let mut total = BilinOp::zero(c0_ctx.clone());
    for (w, comp) in by_weight {
        let basis = keys_with(&c0_ctx, c.parity, c.mode.is_classical(), Some(&w));
        let mut coord_index: BTreeMap<(usize, Key), u32> = BTreeMap::new();
        let index = |coord: (usize, Key),
                         coord_index: &mut BTreeMap<(usize, Key), u32>|
         -> u32 {
            let next = coord_index.len() as u32;
            *coord_index.entry(coord).or_insert(next)
        };
        let mut image_vecs = Vec::new();
        for k in &basis {
            let v = BilinOp::single(c0_ctx.clone(), *k, Rat::one())?;
            let dv = delta0(&v, c.mode)?;
            let mut vec: SVec = Vec::new();
            for g in c.mode.generators() {
                for (kk, coeff) in dv.value(*g).terms() {
                    vec.push((index((g.index(), *kk), &mut coord_index), coeff.clone()));
                }
            }
            vec.sort_by_key(|(i, _)| *i);
            image_vecs.push(vec);
        }
        let mut target: SVec = comp
            .iter()
            .map(|(slot, k, coeff)| (index((*slot, *k), &mut coord_index), coeff.clone()))
            .collect();
        target.sort_by_key(|(i, _)| *i);
        let bound = coord_index.len() as u32;
        match solve_span(&image_vecs, &target, bound) {
            None => return Ok(None),
            Some(u) => {
                for (coeff, k) in u.iter().zip(&basis) {
                    if !coeff.is_zero() {
                        total = total.add(&BilinOp::single(c0_ctx.clone(), *k, coeff.clone())?)?;
                    }
                }
            }
        }
    }
    // paranoia: the witness must reproduce the cocycle
    let check = delta0(&total, c.mode)?;
    for g in c.mode.generators() {
        if check.value(*g) != c.value(*g) {
            return Err(Error::Internal("witness verification failed".into()));
        }
    }
    Ok(Some(total))
}

/// Number of the given cocycles that are independent modulo coboundaries.
pub fn independent_mod_coboundaries(cocycles: &[Cochain1]) -> Result<usize> {
    let Some(first) = cocycles.first() else {
        return Ok(0);
    };
    let mode = first.mode;
    let sector = first.parity;
    let max_d = cocycles.iter().map(|c| c.ctx.max_xdeg).max().unwrap_or(0);
    let max_n = cocycles.iter().map(|c| c.ctx.max_order).max().unwrap_or(2);
    let ctx = OpContext {
        max_xdeg: max_d,
        max_order: max_n,
        ..first.ctx.clone()
    };

    let mut coord_index: BTreeMap<(usize, Key), u32> = BTreeMap::new();
    let index = |coord: (usize, Key), m: &mut BTreeMap<(usize, Key), u32>| -> u32 {
        let next = m.len() as u32;
        *m.entry(coord).or_insert(next)
    };

    // weight-zero coboundary space with generous headroom
    let c0_ctx = OpContext {
        max_order: ctx.max_order + 2,
        max_xdeg: ctx.max_xdeg + 3,
        ..ctx.clone()
    };
    let mut ech = Echelon::new();
    for k in keys_with(&c0_ctx, sector, mode.is_classical(), Some(&Rat::zero())) {
        let v = BilinOp::single(c0_ctx.clone(), k, Rat::one())?;
        let dv = delta0(&v, mode)?;
        let mut vec: SVec = Vec::new();
        for g in mode.generators() {
            for (kk, coeff) in dv.value(*g).terms() {
                vec.push((index((g.index(), *kk), &mut coord_index), coeff.clone()));
            }
        }
        vec.sort_by_key(|(i, _)| *i);
        ech.insert(vec);
    }

    let mut count = 0;
    for c in cocycles {
        if c.parity != sector || !c.ctx.same_weights(&ctx) {
            return Err(Error::ParityMismatch(
                "cocycles must share parity and weights".into(),
            ));
        }
        let mut vec: SVec = Vec::new();
        for g in mode.generators() {
            for (kk, coeff) in c.value(*g).terms() {
                vec.push((index((g.index(), *kk), &mut coord_index), coeff.clone()));
            }
        }
        vec.sort_by_key(|(i, _)| *i);
        if ech.insert(vec) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn octx(l: Rat, n: Rat, m: Rat) -> OpContext {
        OpContext::new(l, n, m, 3, 2)
    }

    #[test]
    fn pair_lists() {
        assert_eq!(pairs(AlgebraMode::Osp).len(), 12);
        assert_eq!(pairs(AlgebraMode::Sl2).len(), 3);
    }

    #[test]
    fn delta0_of_multiplication_vanishes_at_sum_weight() {
        let c = octx(rat!(1, 3), rat!(2, 5), rat!(11, 15));
        let v = BilinOp::multiplication(c);
        let dv = delta0(&v, AlgebraMode::Osp).unwrap();
        assert!(dv.is_zero());
        let zero = BilinOp::zero(octx(rat!(0), rat!(0), rat!(2)));
        assert!(delta0(&zero, AlgebraMode::Osp).unwrap().is_zero());
    }

    #[test]
    fn delta0_of_first_derivative_key() {
        let c = octx(rat!(0), rat!(0), rat!(1));
        let v = BilinOp::single(c, Key::classical(0, 1, 0), rat!(1)).unwrap();
        let dv = delta0(&v, AlgebraMode::Osp).unwrap();
        assert!(!dv.is_zero());
    }

    #[test]
    fn delta_squared_vanishes() {
        // delta1(delta0(v)) = 0 for a spanning set of both parities, in
        // both algebra modes.
        let weights = [
            (rat!(0), rat!(0), rat!(1)),
            (rat!(1, 2), rat!(-1, 3), rat!(2)),
            (rat!(-1, 2), rat!(-1, 2), rat!(3, 2)),
        ];
        for (l, n, m) in weights {
            let ctx = OpContext::new(l, n, m, 2, 1);
            for mode in [AlgebraMode::Osp, AlgebraMode::Sl2] {
                for key in keys_with(&ctx, Parity::Even, mode.is_classical(), None)
                    .into_iter()
                    .chain(keys_with(&ctx, Parity::Odd, mode.is_classical(), None))
                {
                    let v = BilinOp::single(ctx.clone(), key, rat!(1)).unwrap();
                    let dv = delta0(&v, mode).unwrap();
                    let ddv = delta1(&dv).unwrap();
                    assert!(ddv.is_zero(), "delta^2 != 0 on {key:?} ({mode:?})");
                }
            }
        }
    }

    #[test]
    fn pair_table_supersymmetry_entry() {
        // the (theta, theta) entry of delta1 is
        // 2 (-1)^{p(c)} X_theta . c(X_theta) - (1/2) c(X_1)
        let ctx = octx(rat!(0), rat!(-1, 2), rat!(1));
        let key = Key::new(0, 1, 1, 0, 0, 0);
        let c = Cochain1::basis(ctx.clone(), AlgebraMode::Osp, Gen::Theta, key).unwrap();
        let table = delta1(&c).unwrap();
        let sign = Parity::koszul(Parity::Odd, c.parity);
        let expect = act(&Gen::Theta.field(), c.value(Gen::Theta))
            .unwrap()
            .scale(&(&sign * &rat!(2)))
            .sub(&c.value(Gen::One).scale(&rat!(1, 2)))
            .unwrap();
        assert_eq!(table.entry(Gen::Theta, Gen::Theta).unwrap(), &expect);
    }

    #[test]
    fn delta1_entries_are_super_antisymmetric() {
        // value(g,h) = -(-1)^{|g||h|} value(h,g), recomputing the swapped
        // entry directly from the coboundary formula
        let ctx = octx(rat!(1, 2), rat!(-1, 2), rat!(1));
        let keys = [Key::new(0, 0, 1, 0, 0, 0), Key::new(0, 1, 0, 0, 1, 0)];
        for key in keys {
            for gen in Gen::ALL {
                let c = Cochain1::basis(ctx.clone(), AlgebraMode::Osp, gen, key).unwrap();
                let table = delta1(&c).unwrap();
                for ((g, h), val) in &table.entries {
                    let sign_g = Parity::koszul(h.parity(), c.parity);
                    let sign_h = Parity::koszul(g.parity(), h.parity().add(c.parity));
                    let t1 = act(&h.field(), c.value(*g)).unwrap().scale(&sign_g);
                    let t2 = act(&g.field(), c.value(*h)).unwrap().scale(&sign_h);
                    let bracket = crate::superfield::contact_bracket(
                        &h.hamiltonian(),
                        &g.hamiltonian(),
                    );
                    let cb = c
                        .value_on_combination(&expand_in_basis(&bracket).unwrap(), &t1.ctx)
                        .unwrap();
                    let swapped = t1.sub(&t2).unwrap().sub(&cb).unwrap();
                    let expect = swapped.scale(&-&Parity::koszul(g.parity(), h.parity()));
                    assert_eq!(val, &expect, "antisymmetry at ({}, {})", g.name(), h.name());
                }
            }
        }
    }

    #[test]
    fn grading_diagonal_on_basis() {
        let ctx = octx(rat!(1, 3), rat!(2, 5), rat!(11, 15));
        for (slot, key) in cochain_coords(&ctx, Parity::Even, AlgebraMode::Osp, None, &Gen::ALL)
        {
            let g = Gen::ALL[slot];
            let c = Cochain1::basis(ctx.clone(), AlgebraMode::Osp, g, key).unwrap();
            let lc = grading_operator(&c).unwrap();
            let expect = c.scale(&cochain_weight(&ctx, g, &key));
            for gg in Gen::ALL {
                assert_eq!(lc.value(gg), expect.value(gg), "{} {:?}", g.name(), key);
            }
        }
    }

    #[test]
    fn grading_eigenvalue_of_multiplication_on_x1() {
        // basis cochain supported on X_1 with the multiplication key at
        // mu = lambda + nu: X_x fixes the value and [X_x, X_1] = -X_1, so
        // the grading formula gives +1 (the value is frozen from the
        // formula itself; the sign convention matches the displayed
        // definition).
        let ctx = octx(rat!(1, 4), rat!(1, 4), rat!(1, 2));
        assert_eq!(
            cochain_weight(&ctx, Gen::One, &Key::classical(0, 0, 0)),
            rat!(1)
        );
        // and weight-0 keys on weight-0 generators are in the kernel
        assert_eq!(
            cochain_weight(&ctx, Gen::X, &Key::classical(0, 1, 0)),
            rat!(-1)
        );
        let ctx1 = octx(rat!(0), rat!(0), rat!(1));
        assert_eq!(
            cochain_weight(&ctx1, Gen::X, &Key::classical(0, 1, 0)),
            rat!(0)
        );
    }

    #[test]
    fn relative_c0_invariants_contain_multiplication() {
        // mult is sl(2)-invariant at mu = lambda + nu, so it must lie in
        // the span returned for the relative coefficient space.
        let c0 = OpContext::new(rat!(1, 3), rat!(2, 5), rat!(11, 15), 3, 3);
        let inv = c0_basis_keys(&c0, Parity::Even, AlgebraMode::Osp, &rat!(0), true).unwrap();
        let mut key_ix: BTreeMap<Key, u32> = BTreeMap::new();
        let mut to_vec = |op: &BilinOp, key_ix: &mut BTreeMap<Key, u32>| -> SVec {
            let mut v: SVec = op
                .terms()
                .map(|(k, c)| {
                    let next = key_ix.len() as u32;
                    (*key_ix.entry(*k).or_insert(next), c.clone())
                })
                .collect();
            v.sort_by_key(|(i, _)| *i);
            v
        };
        let mut ech = Echelon::new();
        for v in &inv {
            ech.insert(to_vec(v, &mut key_ix));
        }
        let mult = to_vec(&BilinOp::multiplication(c0), &mut key_ix);
        assert!(ech.contains(mult));
    }
}
