//! Homology of the DG-algebras at desk scale: filtration-bounded subcomplexes
//! (degenerate), quotient towers by powers of the central maximal ideal (all
//! variants and KLR), and cyclotomic dimension oracles.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::{orbit, truncate};
use crate::error::{Error, Result};
use crate::hecke_core::{DiffQ, HeckeAlg, HeckeElement, HeckeKey, HeckeLetter, HeckeWord};
use crate::klr_core::{BasisKey, KlrAlg};
use crate::linalg::{self, Echelon, Reducer, SparseRow};
use crate::perm::Perm;
use crate::report::{CheckRecord, Report};
use crate::scalars_params::{show_seq, Multiplicities, ParamSet, Scalar, Variant};
use crate::superrings::{exponents_up_to, mask_indices, ExtMask, Ring, SuperPoly};

/// Cochain complex with ∂ : C^k → C^{k−1}, k = λ-degree.
#[derive(Debug, Clone)]
pub struct FiniteComplex {
    pub labels: Vec<Vec<String>>,
    /// diff[k][j] = ∂ of the j-th basis vector of C^k (empty for k = 0)
    pub diff: Vec<Vec<SparseRow>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub k: usize,
    pub dim: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub homology: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn h(&self, k: usize) -> usize {
        self.degrees.get(k).map(|d| d.homology).unwrap_or(0)
    }

    pub fn euler_chain(&self) -> i64 {
        self.degrees.iter().map(|d| if d.k % 2 == 0 { d.dim as i64 } else { -(d.dim as i64) }).sum()
    }

    pub fn euler_homology(&self) -> i64 {
        self.degrees.iter().map(|d| if d.k % 2 == 0 { d.homology as i64 } else { -(d.homology as i64) }).sum()
    }
}

impl FiniteComplex {
    pub fn dim(&self, k: usize) -> usize {
        self.labels.get(k).map(|l| l.len()).unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    /// Verifies ∂∘∂ = 0 exactly.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 2..self.diff.len() {
            for (j, row) in self.diff[k].iter().enumerate() {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (c, x) in row {
                    for (c2, y) in &self.diff[k - 1][*c] {
                        *acc.entry(*c2).or_insert_with(Scalar::zero) += x * y;
                    }
                }
                if acc.values().any(|v| !v.is_zero()) {
                    return Err(Error::Internal(format!("∂² ≠ 0 on {}", self.labels[k][j])));
                }
            }
        }
        Ok(())
    }
}

/// Exact kernel/image ranks per λ-degree.
pub fn homology_ranks(c: &FiniteComplex) -> HomologyReport {
    let top = c.labels.len();
    let ranks: Vec<usize> = (0..=top).into_par_iter().map(|k| if k == 0 || k >= top { 0 } else { linalg::rank_of_rows(&c.diff[k]) }).collect();
    let degrees = (0..top)
        .map(|k| {
            let dim = c.dim(k);
            let cycles = dim - ranks[k];
            let boundaries = ranks[k + 1];
            DegreeHomology { k, dim, cycles, boundaries, homology: cycles - boundaries }
        })
        .collect();
    HomologyReport { degrees }
}

/// Basis of the cycles of ∂_k among the listed columns of C^k, as rows in C^k coordinates.
fn cycles_of(c: &FiniteComplex, k: usize, cols: &[usize]) -> Vec<SparseRow> {
    if k == 0 {
        return cols.iter().map(|&j| vec![(j, Scalar::one())]).collect();
    }
    let shift = c.dim(k - 1);
    let mut ech = Echelon::new();
    for &j in cols {
        let mut row = c.diff[k][j].clone();
        row.push((shift + j, Scalar::one()));
        ech.insert(&row);
    }
    ech.rows_from(shift).into_iter().map(|r| r.into_iter().map(|(i, x)| (i - shift, x)).collect()).collect()
}

/// Elementary symmetric polynomial e_k(X_1,…,X_d) in the given ring.
pub fn elementary(ring: &Ring, d: usize, k: usize) -> SuperPoly {
    let mut out = SuperPoly::zero(ring.clone(), d);
    for m in 0u32..(1 << d) {
        if m.count_ones() as usize == k {
            let mut e = vec![0; d];
            for r in mask_indices(m) {
                e[r - 1] = 1;
            }
            out.add_term(e, 0, Scalar::one());
        }
    }
    out
}

fn hecke_alg(p: &ParamSet) -> HeckeAlg {
    HeckeAlg::from_params(p)
}

// ---------------------------------------------------------------------------
// Filtration route (degenerate)

/// C_{≤D} = span{X^a T_w ξ^S : |a| + ℓ|S| ≤ D} with ∂_Q.
#[derive(Debug, Clone)]
pub struct FiltrationComplex {
    pub ell: usize,
    pub dmax: usize,
    pub keys: Vec<Vec<HeckeKey>>,
    pub complex: FiniteComplex,
}

impl FiltrationComplex {
    pub fn weight(&self, k: &HeckeKey) -> usize {
        k.poly_degree() as usize + self.ell * k.xi.count_ones() as usize
    }

    /// Column indices of C^k_{≤D}.
    pub fn cols(&self, k: usize, dbound: usize) -> Vec<usize> {
        (0..self.keys[k].len()).filter(|&j| self.weight(&self.keys[k][j]) <= dbound).collect()
    }

    /// Restriction to C_{≤D}, reindexed.
    pub fn restrict(&self, dbound: usize) -> FiniteComplex {
        let d = self.keys.len();
        let mut index: Vec<HashMap<usize, usize>> = vec![HashMap::new(); d];
        let mut labels = vec![Vec::new(); d];
        for k in 0..d {
            for (n, j) in self.cols(k, dbound).into_iter().enumerate() {
                index[k].insert(j, n);
                labels[k].push(self.complex.labels[k][j].clone());
            }
        }
        let mut diff = vec![Vec::new(); d];
        for k in 1..d {
            for j in self.cols(k, dbound) {
                diff[k].push(self.complex.diff[k][j].iter().map(|(c, x)| (index[k - 1][c], x.clone())).collect());
            }
        }
        FiniteComplex { labels, diff }
    }
}

pub fn build_filtration_complex(p: &ParamSet, dmax: usize) -> Result<FiltrationComplex> {
    if p.variant != Variant::Degenerate {
        return Err(Error::VariantMismatch("the filtration route needs the degenerate variant".into()));
    }
    let alg = hecke_alg(p);
    let d = p.d;
    let ell = p.ell();
    let diffq = DiffQ::new(&alg, &p.big_q);
    let mut keys: Vec<Vec<HeckeKey>> = vec![Vec::new(); d + 1];
    for s in 0u32..(1 << d) {
        let k = s.count_ones() as usize;
        let budget = dmax as i64 - (ell * k) as i64;
        if budget < 0 {
            continue;
        }
        for e in exponents_up_to(d, budget as usize) {
            for w in Perm::all(d) {
                keys[k].push(HeckeKey { exps: e.clone(), w, xi: s });
            }
        }
    }
    for ks in keys.iter_mut() {
        ks.sort();
    }
    let index: Vec<HashMap<HeckeKey, usize>> = keys.iter().map(|ks| ks.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
    let weight = |k: &HeckeKey| k.poly_degree() as usize + ell * k.xi.count_ones() as usize;
    let mut diff: Vec<Vec<SparseRow>> = vec![Vec::new(); d + 1];
    for k in 1..=d {
        let rows: Vec<Result<SparseRow>> = keys[k]
            .par_iter()
            .map(|key| {
                let img = diffq.apply(&alg.basis(key.exps.clone(), key.w.clone(), key.xi))?;
                let mut row = Vec::new();
                for (t, c) in &img.terms {
                    if weight(t) > weight(key) {
                        return Err(Error::FiltrationLeak(format!("∂({key}) contains {t}")));
                    }
                    let j = index[k - 1].get(t).ok_or_else(|| Error::FiltrationLeak(format!("∂({key}) contains {t}")))?;
                    row.push((*j, c.clone()));
                }
                Ok(row)
            })
            .collect();
        diff[k] = rows.into_iter().collect::<Result<_>>()?;
    }
    let labels = keys.iter().map(|ks| ks.iter().map(|k| k.to_string()).collect()).collect();
    let complex = FiniteComplex { labels, diff };
    complex.check_square_zero()?;
    Ok(FiltrationComplex { ell, dmax, keys, complex })
}

/// Positive-degree cycles of filtration ≤ D−ℓ that are not boundaries by filtration D.
pub fn surviving_classes(fc: &FiltrationComplex, dbound: usize) -> Vec<(usize, SparseRow)> {
    let c = &fc.complex;
    let mut out = Vec::new();
    let lower = dbound.saturating_sub(fc.ell);
    for k in 1..fc.keys.len() {
        let z = cycles_of(c, k, &fc.cols(k, lower));
        if z.is_empty() {
            continue;
        }
        let mut b = Echelon::new();
        if k + 1 < fc.keys.len() {
            for j in fc.cols(k + 1, dbound) {
                b.insert(&c.diff[k + 1][j]);
            }
        }
        for v in z {
            if !b.contains(&v) {
                out.push((k, v));
                break;
            }
        }
    }
    out
}

/// dim H⁰(C_{≤D}).
pub fn filtration_h0(fc: &FiltrationComplex, dbound: usize) -> usize {
    let cols0 = fc.cols(0, dbound).len();
    if fc.keys.len() < 2 {
        return cols0;
    }
    let rows: Vec<SparseRow> = fc.cols(1, dbound).into_iter().map(|j| fc.complex.diff[1][j].clone()).collect();
    cols0 - linalg::rank_of_rows(&rows)
}

// ---------------------------------------------------------------------------
// Cyclotomic oracles

#[derive(Debug, Clone, Serialize)]
pub struct HeckeCyclotomic {
    pub dim: usize,
    /// dimension of the block of the orbit of `a`
    pub block_dim: usize,
    pub deg_cap: usize,
}

/// dim of the quotient of span{X^e T_w : |e| ≤ cap} by the degree-capped two-sided ideal.
struct CappedQuotient {
    cols: Vec<(Vec<i32>, Perm)>,
    index: HashMap<(Vec<i32>, Perm), usize>,
    ideal: Reducer,
}

impl CappedQuotient {
    fn dim(&self) -> usize {
        self.cols.len() - self.ideal.rank()
    }
}

fn capped_quotient(alg: &HeckeAlg, gens: &[HeckeElement], cap: usize) -> Result<CappedQuotient> {
    let d = alg.d;
    // high degree first so that the quotient basis prefers low degrees
    let mut cols: Vec<(Vec<i32>, Perm)> = Vec::new();
    for e in exponents_up_to(d, cap) {
        for w in Perm::all(d) {
            cols.push((e.clone(), w));
        }
    }
    cols.sort_by(|a, b| {
        let da: i32 = a.0.iter().sum();
        let db: i32 = b.0.iter().sum();
        db.cmp(&da).then(a.cmp(b))
    });
    let index: HashMap<(Vec<i32>, Perm), usize> = cols.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut ideal = Reducer::new();
    for g in gens {
        let deg = g.max_poly_degree().max(0) as usize;
        if deg > cap {
            continue;
        }
        for a in exponents_up_to(d, cap - deg) {
            let mut row = BTreeMap::new();
            for (k, c) in &g.terms {
                let e: Vec<i32> = k.exps.iter().zip(&a).map(|(x, y)| x + y).collect();
                let j = index.get(&(e, k.w.clone())).ok_or_else(|| Error::Internal(format!("generator term {k} outside the cap")))?;
                row.insert(*j, c.clone());
            }
            ideal.insert(row);
            if ideal.rank() == cols.len() {
                break;
            }
        }
    }
    Ok(CappedQuotient { cols, index, ideal })
}

/// dim of the cyclotomic Hecke algebra and of the block of the orbit of `a`.
pub fn cyclotomic_dim_hecke(p: &ParamSet, deg_cap: usize) -> Result<HeckeCyclotomic> {
    let alg = hecke_alg(p);
    let d = p.d;
    let cyc = alg.cyclotomic_poly(&p.big_q);
    let ell = p.ell();
    let top = deg_cap + 2;
    // T_u P(X_1) T_v X^c, straightened; left X-shifts are added in `capped_quotient`
    let mut gens = Vec::new();
    for c in exponents_up_to(d, top.saturating_sub(ell)) {
        for u in Perm::all(d) {
            for v in Perm::all(d) {
                let mut letters: Vec<HeckeLetter> = u.reduced_word().into_iter().map(HeckeLetter::T).collect();
                letters.push(HeckeLetter::Poly(cyc.clone()));
                letters.extend(v.reduced_word().into_iter().map(HeckeLetter::T));
                letters.push(HeckeLetter::Poly(SuperPoly::monomial(alg.ring(), d, c.clone(), 0, Scalar::one())));
                gens.push(HeckeWord::new(letters));
            }
        }
    }
    let gens: Vec<HeckeElement> = gens.par_iter().map(|w| alg.straighten(w)).collect::<Result<_>>()?;
    let dims: Vec<CappedQuotient> = [deg_cap, deg_cap + 1, top].par_iter().map(|&c| capped_quotient(&alg, &gens, c)).collect::<Result<_>>()?;
    if dims[0].dim() != dims[1].dim() || dims[1].dim() != dims[2].dim() {
        return Err(Error::NotStabilized(format!(
            "quotient dims {}, {}, {} at caps {deg_cap}..{top}",
            dims[0].dim(),
            dims[1].dim(),
            dims[2].dim()
        )));
    }
    let q = &dims[2];
    let basis: Vec<usize> = (0..q.cols.len()).filter(|j| !q.ideal.is_pivot(*j)).collect();
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, j)| (*j, i)).collect();
    let n = basis.len();
    // left multiplication by X_r on the quotient
    let mut mats = Vec::new();
    for r in 1..=d {
        let mut m = linalg::zeros(n, n);
        for (col, &j) in basis.iter().enumerate() {
            let (e, w) = &q.cols[j];
            let mut e2 = e.clone();
            e2[r - 1] += 1;
            let idx = q.index.get(&(e2, w.clone())).ok_or_else(|| Error::NotStabilized("quotient basis reaches the cap".into()))?;
            let red = q.ideal.reduce(BTreeMap::from([(*idx, Scalar::one())]));
            for (c, x) in red {
                m[pos[&c]][col] = x;
            }
        }
        mats.push(m);
    }
    let mut block_dim = 0;
    for b in orbit(&p.a) {
        let mut stacked = Vec::new();
        for (r, m) in mats.iter().enumerate() {
            stacked.extend(linalg::mat_pow(&linalg::shift_diag(m, &b[r]), n.max(1)));
        }
        block_dim += n - if stacked.is_empty() { 0 } else { linalg::rank(&stacked) };
    }
    Ok(HeckeCyclotomic { dim: n, block_dim, deg_cap })
}

/// Degree cap used when none is given.
pub fn default_cap(p: &ParamSet) -> usize {
    p.d * p.ell() + 1
}

// ---------------------------------------------------------------------------
// Quotient towers

/// k[x]/J with J = (u_1,…,u_d)^N, realized inside k[x]/(x)^M.
#[derive(Debug, Clone)]
pub struct LocalQuotient {
    pub d: usize,
    pub m: usize,
    pub monos: Vec<Vec<i32>>,
    pub index: HashMap<Vec<i32>, usize>,
    pub ideal: Reducer,
    /// quotient basis (non-pivot monomials)
    pub basis: Vec<usize>,
}

impl LocalQuotient {
    /// `gens` are series without constant term generating an 𝔪-primary ideal.
    pub fn new(gens: &[SuperPoly], n: usize) -> Result<Self> {
        let d = gens.first().map(|g| g.d).unwrap_or(0);
        let mut m = n * (d * d.saturating_sub(1) / 2 + 1);
        loop {
            let lq = Self::attempt(gens, d, n, m)?;
            // (x)^{M−1} ⊆ J + (x)^M certifies (x)^{M−1} ⊆ J
            let top_in = lq.monos.iter().enumerate().filter(|(_, e)| e.iter().sum::<i32>() as usize == m - 1).all(|(j, _)| lq.ideal.is_pivot(j) || lq.ideal.reduce(BTreeMap::from([(j, Scalar::one())])).is_empty());
            if top_in || m > 4 * n * d + 8 {
                if !top_in {
                    return Err(Error::NotStabilized(format!("ideal not 𝔪-primary within degree {m}")));
                }
                return Ok(lq);
            }
            m += 1;
        }
    }

    fn attempt(gens: &[SuperPoly], d: usize, n: usize, m: usize) -> Result<Self> {
        let mut monos = exponents_up_to(d, m.saturating_sub(1));
        monos.sort_by(|a, b| b.iter().sum::<i32>().cmp(&a.iter().sum::<i32>()).then(a.cmp(b)));
        let index: HashMap<Vec<i32>, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let order = m as i64;
        // products u^μ with |μ| = N
        let mut prods = vec![SuperPoly::one(gens[0].ring.clone(), d)];
        for _ in 0..n {
            let mut next = Vec::new();
            for g in gens {
                for p in &prods {
                    next.push(p.mul_truncated(g, Some(order)));
                }
            }
            next.retain(|p| !p.is_zero());
            prods = dedup_span(next);
        }
        let mut ideal = Reducer::new();
        for p in &prods {
            let low = p.min_total_degree().unwrap_or(0) as usize;
            for c in exponents_up_to(d, m.saturating_sub(1 + low)) {
                let g = p.mul_var_exps(&c).keep_below_degree(order);
                let row: BTreeMap<usize, Scalar> = g.terms.iter().map(|((e, _), x)| (index[e], x.clone())).collect();
                ideal.insert(row);
            }
        }
        let basis = (0..monos.len()).filter(|j| !ideal.is_pivot(*j)).collect();
        Ok(LocalQuotient { d, m, monos, index, ideal, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a series on the quotient basis.
    pub fn reduce(&self, f: &SuperPoly) -> BTreeMap<usize, Scalar> {
        let mut row = BTreeMap::new();
        for ((e, _), x) in &f.terms {
            if let Some(j) = self.index.get(e) {
                *row.entry(*j).or_insert_with(Scalar::zero) += x;
            }
        }
        self.ideal.reduce(row)
    }
}

fn dedup_span(v: Vec<SuperPoly>) -> Vec<SuperPoly> {
    let mut seen: Vec<SuperPoly> = Vec::new();
    for p in v {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    seen
}

trait MulExps {
    fn mul_var_exps(&self, c: &[i32]) -> SuperPoly;
}

impl MulExps for SuperPoly {
    fn mul_var_exps(&self, c: &[i32]) -> SuperPoly {
        let mut out = self.clone();
        for (r, &k) in c.iter().enumerate() {
            if k != 0 {
                out = out.mul_var(r + 1, k);
            }
        }
        out
    }
}

/// A quotient complex C/𝔪^N C, with its basis split into (block, local monomial).
#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub n: usize,
    pub complex: FiniteComplex,
    /// per degree k: (block label, local quotient id, local basis column) of each basis vector
    pub coords: Vec<Vec<(String, usize, usize)>>,
    pub locals: Vec<LocalQuotient>,
}

fn hecke_tower_level(p: &ParamSet, n: usize) -> Result<TowerLevel> {
    let alg = hecke_alg(p);
    let d = p.d;
    let ring = alg.ring();
    let diffq = DiffQ::new(&alg, &p.big_q);
    let points = orbit(&p.a);
    let mut locals = Vec::new();
    for b in &points {
        let m_guess = (n * (d * d.saturating_sub(1) / 2 + 1) + 2) as i64 * 2;
        let gens: Vec<SuperPoly> = (1..=d)
            .map(|k| {
                let mut u = elementary(&ring, d, k);
                let c = elementary_value(&p.a, k);
                u.add_term(vec![0; d], 0, -c);
                truncate(&u, b, m_guess)
            })
            .collect::<Result<_>>()?;
        locals.push(LocalQuotient::new(&gens, n)?);
    }
    // C^k basis: (b, local column, w, S)
    let mut heads: Vec<Vec<(Perm, ExtMask)>> = vec![Vec::new(); d + 1];
    for s in 0u32..(1 << d) {
        for w in Perm::all(d) {
            heads[s.count_ones() as usize].push((w, s));
        }
    }
    let mut labels = vec![Vec::new(); d + 1];
    let mut coords = vec![Vec::new(); d + 1];
    let mut index: Vec<HashMap<(usize, usize, Perm, ExtMask), usize>> = vec![HashMap::new(); d + 1];
    for k in 0..=d {
        for (bi, b) in points.iter().enumerate() {
            for &col in &locals[bi].basis {
                for (w, s) in &heads[k] {
                    index[k].insert((bi, col, w.clone(), *s), labels[k].len());
                    labels[k].push(format!("x^{:?}·1_{}·{}", locals[bi].monos[col], show_seq(b), HeckeKey { exps: vec![0; d], w: w.clone(), xi: *s }));
                    coords[k].push((format!("{}|{}|{:b}", show_seq(b), w, s), bi, col));
                }
            }
        }
    }
    let mut diff = vec![Vec::new(); d + 1];
    for k in 1..=d {
        let images: HashMap<(Perm, ExtMask), HeckeElement> = heads[k]
            .par_iter()
            .map(|(w, s)| Ok(((w.clone(), *s), diffq.apply(&alg.basis(vec![0; d], w.clone(), *s))?)))
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for (bi, b) in points.iter().enumerate() {
            let lq = &locals[bi];
            let order = lq.m as i64;
            let mut shifted: HashMap<Vec<i32>, SuperPoly> = HashMap::new();
            for &col in &lq.basis {
                let xc = SuperPoly::monomial(ring.clone(), d, lq.monos[col].clone(), 0, Scalar::one());
                for (w, s) in &heads[k] {
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (key, c) in &images[&(w.clone(), *s)].terms {
                        if !shifted.contains_key(&key.exps) {
                            let xe = SuperPoly::monomial(ring.clone(), d, key.exps.clone(), 0, Scalar::one());
                            shifted.insert(key.exps.clone(), truncate(&xe, b, order)?);
                        }
                        let coeff = xc.mul_truncated(&shifted[&key.exps], Some(order));
                        for (lc, x) in lq.reduce(&coeff) {
                            let j = index[k - 1][&(bi, lc, key.w.clone(), key.xi)];
                            *row.entry(j).or_insert_with(Scalar::zero) += c * &x;
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    rows.push(row.into_iter().collect::<SparseRow>());
                }
            }
        }
        diff[k] = rows;
    }
    let complex = FiniteComplex { labels, diff };
    complex.check_square_zero()?;
    Ok(TowerLevel { n, complex, coords, locals })
}

fn elementary_value(a: &[Scalar], k: usize) -> Scalar {
    let d = a.len();
    let mut total = Scalar::zero();
    for m in 0u32..(1 << d) {
        if m.count_ones() as usize == k {
            let mut prod = Scalar::one();
            for r in mask_indices(m) {
                prod *= &a[r - 1];
            }
            total += prod;
        }
    }
    total
}

fn klr_tower_level(alg: &KlrAlg, lam: &Multiplicities, n: usize) -> Result<TowerLevel> {
    let d = alg.d;
    let seqs = alg.seqs();
    let ring = alg.ring(&seqs[0]);
    let m_guess = (n * (d * d.saturating_sub(1) / 2 + 1) + 2) as i64 * 2;
    let gens: Vec<SuperPoly> = (1..=d).map(|k| elementary(&ring, d, k).keep_below_degree(m_guess)).collect();
    let lq = LocalQuotient::new(&gens, n)?;
    let heads_all: Vec<BasisKey> = alg.all_keys(0);
    let mut heads: Vec<Vec<BasisKey>> = vec![Vec::new(); d + 1];
    for h in heads_all {
        heads[h.lambda() as usize].push(h);
    }
    let mut labels = vec![Vec::new(); d + 1];
    let mut coords = vec![Vec::new(); d + 1];
    let mut index: Vec<HashMap<(BasisKey, usize), usize>> = vec![HashMap::new(); d + 1];
    for k in 0..=d {
        for h in &heads[k] {
            for &col in &lq.basis {
                index[k].insert((h.clone(), col), labels[k].len());
                labels[k].push(format!("{h}·Y^{:?}", lq.monos[col]));
                coords[k].push((h.to_string(), 0, col));
            }
        }
    }
    let mut diff = vec![Vec::new(); d + 1];
    for k in 1..=d {
        let images: Vec<BTreeMap<BasisKey, Scalar>> =
            heads[k].par_iter().map(|h| alg.d_lambda(&alg.basis_element(h)?, lam)).collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for img in &images {
            for &col in &lq.basis {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (key, c) in img {
                    let e: Vec<i32> = key.n.iter().zip(&lq.monos[col]).map(|(x, y)| x + y).collect();
                    let mono = SuperPoly::monomial(ring.clone(), d, e, 0, Scalar::one()).keep_below_degree(lq.m as i64);
                    let head = BasisKey { n: vec![0; d], ..key.clone() };
                    for (lc, x) in lq.reduce(&mono) {
                        let j = index[k - 1][&(head.clone(), lc)];
                        *row.entry(j).or_insert_with(Scalar::zero) += c * &x;
                    }
                }
                row.retain(|_, v| !v.is_zero());
                rows.push(row.into_iter().collect::<SparseRow>());
            }
        }
        diff[k] = rows;
    }
    let complex = FiniteComplex { labels, diff };
    complex.check_square_zero()?;
    Ok(TowerLevel { n, complex, coords, locals: vec![lq] })
}

/// Which side a quotient tower is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerSide {
    Hecke,
    Klr,
}

pub fn build_quotient_complex(p: &ParamSet, side: TowerSide, n: usize) -> Result<TowerLevel> {
    match side {
        TowerSide::Hecke => hecke_tower_level(p, n),
        TowerSide::Klr => klr_tower_level(&KlrAlg::from_params(p)?, &p.lambda(), n),
    }
}

/// Matrix of the projection C_{N'} → C_N in degree k, as images of the basis of C_{N'}^k.
pub fn transition(hi: &TowerLevel, lo: &TowerLevel, k: usize) -> Vec<SparseRow> {
    let lo_index: HashMap<(&str, usize), usize> = lo.coords[k].iter().enumerate().map(|(i, (b, _, c))| ((b.as_str(), *c), i)).collect();
    hi.coords[k]
        .iter()
        .map(|(b, li, c)| {
            let hq = &hi.locals[*li];
            let lq = &lo.locals[*li];
            let e = &hq.monos[*c];
            let mut row = Vec::new();
            if let Some(j) = lq.index.get(e) {
                for (lc, x) in lq.ideal.reduce(BTreeMap::from([(*j, Scalar::one())])) {
                    row.push((lo_index[&(b.as_str(), lc)], x));
                }
            }
            row
        })
        .collect()
}

/// First nonzero class of H^k(C_{N'}) → H^k(C_N), k > 0, if any.
pub fn transition_survivor(hi: &TowerLevel, lo: &TowerLevel) -> Option<(usize, String)> {
    for k in 1..hi.complex.labels.len() {
        let cols: Vec<usize> = (0..hi.complex.dim(k)).collect();
        let z = cycles_of(&hi.complex, k, &cols);
        if z.is_empty() {
            continue;
        }
        let t = transition(hi, lo, k);
        let mut b = Echelon::new();
        if k + 1 < lo.complex.labels.len() {
            for r in &lo.complex.diff[k + 1] {
                b.insert(r);
            }
        }
        for v in z {
            let mut img: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (i, x) in &v {
                for (j, y) in &t[*i] {
                    *img.entry(*j).or_insert_with(Scalar::zero) += x * y;
                }
            }
            let img: SparseRow = img.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if !b.contains(&img) {
                let w: Vec<String> = v.iter().map(|(i, x)| format!("{}·{}", x, hi.complex.labels[k][*i])).collect();
                return Some((k, w.join(" + ")));
            }
        }
    }
    None
}

/// H⁰ oracle for a tower: the block dimension on the matching side.
pub fn tower_oracle(p: &ParamSet, side: TowerSide) -> Result<usize> {
    match side {
        TowerSide::Hecke => Ok(cyclotomic_dim_hecke(p, default_cap(p))?.block_dim),
        TowerSide::Klr => {
            let alg = KlrAlg::from_params(p)?;
            let cap = klr_cap(p);
            Ok(alg.cyclotomic_dim(&p.lambda(), cap)?.dim)
        }
    }
}

/// Degree cap (KLR degree units) for the KLR cyclotomic oracle.
pub fn klr_cap(p: &ParamSet) -> i64 {
    (2 * p.d * p.ell() + 4) as i64
}

// ---------------------------------------------------------------------------
// Verification

fn base_id(p: &ParamSet, route: &str) -> String {
    format!("homology.{route}.{}.d{}.Q{}.a{}", p.variant, p.d, show_seq(&p.big_q), show_seq(&p.a))
}

/// Filtration route: vanishing of positive-degree classes and H⁰ stabilization.
pub fn verify_filtration(p: &ParamSet, dlist: &[usize]) -> Report {
    let id = base_id(p, "filtration");
    let dmax = dlist.iter().copied().max().unwrap_or(0);
    let fc = match build_filtration_complex(p, dmax) {
        Ok(f) => f,
        Err(e) => return Report::from_records(vec![CheckRecord::error(format!("{id}.build"), e.to_string())]),
    };
    let fc = &fc;
    let mut recs: Vec<CheckRecord> = dlist
        .par_iter()
        .map(|&dd| {
            CheckRecord::timed(format!("{id}.D{dd:02}.positive_classes_die"), || {
                let s = surviving_classes(fc, dd);
                Ok(s.first().map(|(k, v)| {
                    let w: Vec<String> = v.iter().map(|(i, x)| format!("{}·{}", x, fc.complex.labels[*k][*i])).collect();
                    format!("H^{k} class of filtration ≤ {} survives: {}", dd.saturating_sub(fc.ell), w.join(" + "))
                }))
            })
        })
        .collect();
    recs.push(CheckRecord::timed(format!("{id}.h0_stable"), || {
        let window: Vec<usize> = (dmax.saturating_sub(2)..=dmax).collect();
        let h0: Vec<usize> = window.par_iter().map(|&dd| filtration_h0(fc, dd)).collect();
        let oracle = cyclotomic_dim_hecke(p, default_cap(p))?.dim;
        if h0.iter().all(|&h| h == oracle) {
            Ok(None)
        } else {
            Ok(Some(format!("dim H⁰ at D = {window:?} is {h0:?}, oracle {oracle}")))
        }
    }));
    recs.push(CheckRecord::timed(format!("{id}.euler"), || {
        let h = homology_ranks(&fc.restrict(dmax));
        if h.euler_chain() == h.euler_homology() {
            Ok(None)
        } else {
            Ok(Some(format!("χ(C) = {} but χ(H) = {}", h.euler_chain(), h.euler_homology())))
        }
    }));
    Report::from_records(recs)
}

/// Quotient-tower route: transition maps N+lag → N vanish on H^{>0} and H⁰ stabilizes to the oracle.
pub fn verify_tower(p: &ParamSet, side: TowerSide, nlist: &[usize], lag: usize) -> Report {
    let route = match side {
        TowerSide::Hecke => "tower.hecke",
        TowerSide::Klr => "tower.klr",
    };
    let id = base_id(p, route);
    let mut levels_needed: Vec<usize> = nlist.iter().flat_map(|&n| [n, n + lag]).collect();
    levels_needed.sort();
    levels_needed.dedup();
    let built: Vec<Result<TowerLevel>> = levels_needed.par_iter().map(|&n| build_quotient_complex(p, side, n)).collect();
    let mut levels: BTreeMap<usize, TowerLevel> = BTreeMap::new();
    for (n, r) in levels_needed.iter().zip(built) {
        match r {
            Ok(l) => {
                levels.insert(*n, l);
            }
            Err(e) => return Report::from_records(vec![CheckRecord::error(format!("{id}.N{n}.build"), e.to_string())]),
        }
    }
    let levels = &levels;
    let mut recs: Vec<CheckRecord> = nlist
        .par_iter()
        .map(|&n| {
            CheckRecord::timed(format!("{id}.N{n}.transition_from_N{}", n + lag), || {
                Ok(transition_survivor(&levels[&(n + lag)], &levels[&n]).map(|(k, w)| format!("H^{k} class maps nontrivially: {w}")))
            })
        })
        .collect();
    recs.push(CheckRecord::timed(format!("{id}.coherence"), || {
        // N+2 → N+1 → N equals N+2 → N on every degree
        let n = nlist.iter().copied().min().unwrap_or(1);
        let l0 = build_quotient_complex(p, side, n)?;
        let l1 = build_quotient_complex(p, side, n + 1)?;
        let l2 = build_quotient_complex(p, side, n + 2)?;
        for k in 0..l0.complex.labels.len() {
            let t21 = transition(&l2, &l1, k);
            let t10 = transition(&l1, &l0, k);
            let t20 = transition(&l2, &l0, k);
            for (i, row) in t21.iter().enumerate() {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (j, x) in row {
                    for (c, y) in &t10[*j] {
                        *acc.entry(*c).or_insert_with(Scalar::zero) += x * y;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                let direct: BTreeMap<usize, Scalar> = t20[i].iter().cloned().collect();
                if acc != direct {
                    return Ok(Some(format!("degree {k}, basis vector {}", l2.complex.labels[k][i])));
                }
            }
        }
        Ok(None)
    }));
    recs.push(CheckRecord::timed(format!("{id}.h0_stable"), || {
        let oracle = tower_oracle(p, side)?;
        let mut ns: Vec<usize> = nlist.to_vec();
        ns.sort();
        let tail: Vec<usize> = ns.iter().rev().take(2).copied().collect();
        let h0: Vec<usize> = tail.iter().map(|n| homology_ranks(&levels[n].complex).h(0)).collect();
        if h0.iter().all(|&h| h == oracle) {
            Ok(None)
        } else {
            Ok(Some(format!("dim H⁰ at N = {tail:?} is {h0:?}, oracle {oracle}")))
        }
    }));
    Report::from_records(recs)
}

/// Runs the route matching the variant: filtration for degenerate, Hecke tower for q.
pub fn verify_quasi_iso(p: &ParamSet, dlist: &[usize], nlist: &[usize]) -> Report {
    match p.variant {
        Variant::Degenerate => verify_filtration(p, dlist),
        Variant::Q => verify_tower(p, TowerSide::Hecke, nlist, p.ell()),
    }
}

/// Hecke block dimension against the KLR cyclotomic dimension for (ν, Λ) read off `p`.
pub fn cross_oracle(p: &ParamSet) -> Report {
    let id = format!("dims.cross.{}.d{}.Q{}.a{}", p.variant, p.d, show_seq(&p.big_q), show_seq(&p.a));
    Report::from_records(vec![CheckRecord::timed(id, || {
        let h = cyclotomic_dim_hecke(p, default_cap(p))?;
        let alg = KlrAlg::from_params(p)?;
        let k = alg.cyclotomic_dim(&p.lambda(), klr_cap(p))?;
        if h.block_dim == k.dim {
            Ok(None)
        } else {
            Ok(Some(format!("Hecke block {} but KLR {}", h.block_dim, k.dim)))
        }
    })])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: usize, big_q: &[i64]) -> ParamSet {
        let a: Vec<i64> = vec![big_q[0]; d];
        let mut v: Vec<i64> = big_q.to_vec();
        v.sort();
        v.dedup();
        ParamSet::ints(Variant::Degenerate, None, big_q, &a, &v).unwrap()
    }

    #[test]
    fn filtration_examples() {
        let fc = build_filtration_complex(&deg(1, &[0]), 3).unwrap();
        assert_eq!(fc.keys[0].len(), 4);
        assert_eq!(fc.keys[1].len(), 3);
        let h = homology_ranks(&fc.complex);
        assert_eq!((h.h(0), h.h(1)), (1, 0));
        let fc = build_filtration_complex(&deg(2, &[0]), 6).unwrap();
        assert_eq!(fc.complex.total_dim(), 170);
        let fc = build_filtration_complex(&deg(2, &[0]), 0).unwrap();
        assert_eq!(fc.complex.total_dim(), 2);
        assert!(fc.complex.diff[1].is_empty());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(cyclotomic_dim_hecke(&deg(1, &[0]), 3).unwrap().dim, 1);
        let p = ParamSet::ints(Variant::Degenerate, None, &[0, 1], &[0], &[0, 1]).unwrap();
        assert_eq!(cyclotomic_dim_hecke(&p, 3).unwrap().dim, 2);
        assert_eq!(cyclotomic_dim_hecke(&deg(2, &[0]), 3).unwrap().dim, 2);
    }

    #[test]
    fn quotient_examples() {
        let p = deg(1, &[0]);
        let l3 = build_quotient_complex(&p, TowerSide::Hecke, 3).unwrap();
        let h = homology_ranks(&l3.complex);
        assert_eq!((h.h(0), h.h(1)), (1, 1));
        let l4 = build_quotient_complex(&p, TowerSide::Hecke, 4).unwrap();
        assert!(transition_survivor(&l4, &l3).is_none());
        let q = ParamSet::ints(Variant::Q, Some(2), &[3], &[3], &[3]).unwrap();
        let l3 = build_quotient_complex(&q, TowerSide::Hecke, 3).unwrap();
        let h = homology_ranks(&l3.complex);
        assert_eq!((h.h(0), h.h(1)), (1, 1));
    }

    #[test]
    fn filtration_suite_small() {
        let r = verify_filtration(&deg(1, &[0, 0]), &[2, 4, 6, 8]);
        assert!(r.all_pass(), "{:#?}", r.failures());
    }

    #[test]
    fn klr_single_strand_tower() {
        let p = ParamSet::ints(Variant::Degenerate, None, &[0, 0], &[0], &[0, 1]).unwrap();
        let r = verify_tower(&p, TowerSide::Klr, &[2, 3, 4], 2);
        assert!(r.all_pass(), "{:#?}", r.failures());
    }
}
