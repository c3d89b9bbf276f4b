//! Exact sparse Gaussian elimination over the rationals.
//!
//! Vectors are sorted `(index, coefficient)` lists. Elimination is
//! deterministic: rows are consumed in the order given and each row is
//! reduced against the pivots found so far, pivoting on its first nonzero
//! entry, so computed bases are reproducible bit for bit.

use std::collections::BTreeMap;

use crate::scalar::Rat;

pub type SVec = Vec<(u32, Rat)>;

pub fn svec_is_zero(v: &SVec) -> bool {
    v.is_empty()
}

pub fn svec_from_map(map: BTreeMap<u32, Rat>) -> SVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn svec_scale(v: &SVec, s: &Rat) -> SVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c * s)).collect()
}

/// `a + s * b`, merging the sorted supports.
pub fn svec_axpy(a: &SVec, s: &Rat, b: &SVec) -> SVec {
    if s.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() || ib < b.len() {
        match (a.get(ia), b.get(ib)) {
            (Some((ka, ca)), Some((kb, cb))) if ka == kb => {
                let c = ca + &(cb * s);
                if !c.is_zero() {
                    out.push((*ka, c));
                }
                ia += 1;
                ib += 1;
            }
            (Some((ka, ca)), Some((kb, _))) if ka < kb => {
                out.push((*ka, ca.clone()));
                ia += 1;
            }
            (Some(_), Some((kb, cb))) => {
                let c = cb * s;
                if !c.is_zero() {
                    out.push((*kb, c));
                }
                ib += 1;
            }
            (Some((ka, ca)), None) => {
                out.push((*ka, ca.clone()));
                ia += 1;
            }
            (None, Some((kb, cb))) => {
                let c = cb * s;
                if !c.is_zero() {
                    out.push((*kb, c));
                }
                ib += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn svec_get(v: &SVec, idx: u32) -> Option<&Rat> {
    v.binary_search_by_key(&idx, |(i, _)| *i)
        .ok()
        .map(|p| &v[p].1)
}

/// Incremental row-echelon basis of a subspace.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// Pivot rows keyed by leading index; each row is monic at its pivot
    /// and fully reduced against the other pivots.
    rows: BTreeMap<u32, SVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result has no support on pivot
    /// indices.
    pub fn reduce(&self, mut v: SVec) -> SVec {
        loop {
            let Some(&(lead, _)) = v.first() else {
                return v;
            };
            // rows are mutually reduced, so a single pass over the
            // support suffices
            let mut changed = false;
            let mut k = 0;
            while k < v.len() {
                let idx = v[k].0;
                if let Some(row) = self.rows.get(&idx) {
                    let c = -&v[k].1;
                    v = svec_axpy(&v, &c, row);
                    changed = true;
                    break;
                }
                k += 1;
            }
            if !changed {
                return v;
            }
            let _ = lead;
        }
    }

    /// Inserts `v` if independent of the basis; returns true on success.
    pub fn insert(&mut self, v: SVec) -> bool {
        let v = self.reduce(v);
        let Some((lead, c)) = v.first().cloned() else {
            return false;
        };
        let inv = c.recip().expect("nonzero leading coefficient");
        let v = svec_scale(&v, &inv);
        // keep existing rows reduced against the new pivot
        let mut updates = Vec::new();
        for (l, row) in &self.rows {
            if let Some(c) = svec_get(row, lead) {
                updates.push((*l, svec_axpy(row, &-c, &v)));
            }
        }
        for (l, row) in updates {
            self.rows.insert(l, row);
        }
        self.rows.insert(lead, v);
        true
    }

    pub fn contains(&self, v: SVec) -> bool {
        svec_is_zero(&self.reduce(v))
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[SVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// Equation system `sum_j coeffs[j] u_j = 0`: rows are equations over
/// `ncols` unknowns.
pub struct LinSystem {
    pub ncols: u32,
    pub rows: Vec<SVec>,
}

impl LinSystem {
    /// Deterministic basis of the solution space.
    pub fn nullspace(&self) -> Vec<SVec> {
        let mut ech = Echelon::new();
        for r in &self.rows {
            ech.insert(r.clone());
        }
        let pivots: Vec<u32> = ech.rows.keys().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if ech.rows.contains_key(&free) {
                continue;
            }
            // v[free] = 1; v[p] = -row_p[free]
            let mut v: Vec<(u32, Rat)> = vec![(free, Rat::one())];
            for p in &pivots {
                if let Some(c) = svec_get(&ech.rows[p], free) {
                    v.push((*p, -c));
                }
            }
            v.sort_by_key(|(i, _)| *i);
            out.push(v);
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }
}

/// Solves `sum_i u_i v_i = target` for the coefficients `u`; `None` when
/// the target is outside the span. Vector coordinates live below
/// `coord_bound`.
pub fn solve_span(vectors: &[SVec], target: &SVec, coord_bound: u32) -> Option<Vec<Rat>> {
    // augment each vector with a unit tail that tracks the combination
    let mut ech = Echelon::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut aug = v.clone();
        aug.push((coord_bound + i as u32, Rat::one()));
        ech.insert(aug);
    }
    let reduced = ech.reduce(target.clone());
    // main part must cancel; the tail then holds -u
    let mut coeffs = vec![Rat::zero(); vectors.len()];
    for (idx, c) in reduced {
        if idx < coord_bound {
            return None;
        }
        coeffs[(idx - coord_bound) as usize] = -c;
    }
    Some(coeffs)
}
