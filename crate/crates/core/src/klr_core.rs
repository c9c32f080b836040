//! The enhanced KLR algebra: words in τ, dots and floating dots, the
//! polynomial action on PR_ν, expansion over the τ_w(I)Yⁿ basis, the
//! differential d_Λ and cyclotomic quotient dimensions.
//!
//! Words are stored in product order: the leftmost letter is the top of the
//! diagram and acts last. Equality of elements is decided through the action,
//! which is faithful; basis expansions come from exact linear solving.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, modp, Echelon};
use crate::perm::{next_permutation, Perm};
use crate::report::{CheckRecord, Report};
use crate::scalars_params::{sc, show, show_seq, Multiplicities, ParamSet, Quiver, Scalar};
use crate::superrings::{exponents_of_degree, exponents_up_to, klr_simple, mask_indices, ExtMask, Mono, Ring, SuperPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KlrLetter {
    Tau(usize),
    Dot(usize),
    FloatingDot,
}

impl fmt::Display for KlrLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KlrLetter::Tau(r) => write!(f, "τ{r}"),
            KlrLetter::Dot(r) => write!(f, "Y{r}"),
            KlrLetter::FloatingDot => write!(f, "Ω"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KlrWord {
    pub source: Vec<Scalar>,
    pub letters: Vec<KlrLetter>,
}

impl KlrWord {
    pub fn new(source: Vec<Scalar>, letters: Vec<KlrLetter>) -> Self {
        KlrWord { source, letters }
    }

    pub fn idempotent(source: Vec<Scalar>) -> Self {
        KlrWord { source, letters: Vec::new() }
    }

    /// Label sequence in force just below each letter.
    pub fn states(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![Vec::new(); self.letters.len()];
        let mut cur = self.source.clone();
        for (pos, l) in self.letters.iter().enumerate().rev() {
            out[pos] = cur.clone();
            if let KlrLetter::Tau(r) = l {
                if *r >= 1 && *r < cur.len() {
                    cur.swap(r - 1, *r);
                }
            }
        }
        out
    }

    pub fn target(&self) -> Vec<Scalar> {
        let mut cur = self.source.clone();
        for l in self.letters.iter().rev() {
            if let KlrLetter::Tau(r) = l {
                if *r >= 1 && *r < cur.len() {
                    cur.swap(r - 1, *r);
                }
            }
        }
        cur
    }

    pub fn floating_dots(&self) -> usize {
        self.letters.iter().filter(|l| **l == KlrLetter::FloatingDot).count()
    }

    /// self·other (other acts first); None when the idempotents do not match.
    pub fn compose(&self, other: &KlrWord) -> Option<KlrWord> {
        if other.target() != self.source {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Some(KlrWord { source: other.source.clone(), letters })
    }
}

impl fmt::Display for KlrWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}·")?;
        }
        write!(f, "1_{}", show_seq(&self.source))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KlrElement {
    pub terms: BTreeMap<KlrWord, Scalar>,
}

impl KlrElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: KlrWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, Scalar::one());
        e
    }

    /// Σ c·Y^e 1_source for an exterior-free polynomial.
    pub fn from_poly(source: &[Scalar], p: &SuperPoly) -> Result<Self> {
        let mut e = Self::zero();
        for ((exps, m), c) in &p.terms {
            if *m != 0 {
                return Err(Error::RingMismatch("floating dots are not polynomial letters".into()));
            }
            let mut letters = Vec::new();
            for (r, &k) in exps.iter().enumerate() {
                if k < 0 {
                    return Err(Error::RingMismatch("negative exponent in a KLR polynomial".into()));
                }
                letters.extend(std::iter::repeat(KlrLetter::Dot(r + 1)).take(k as usize));
            }
            e.add_term(KlrWord::new(source.to_vec(), letters), c.clone());
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: KlrWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &KlrElement, c: &Scalar) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &KlrElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &sc(-1));
        out
    }

    pub fn mul(&self, other: &KlrElement) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(w) = a.compose(b) {
                    out.add_term(w, ca * cb);
                }
            }
        }
        out
    }
}

impl fmt::Display for KlrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{}·{}", show(c), w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// τ_w(I)·Yⁿ·1_source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub w: Perm,
    pub omegas: ExtMask,
    pub n: Vec<i32>,
    pub source: Vec<Scalar>,
}

impl BasisKey {
    pub fn target(&self) -> Vec<Scalar> {
        self.w.act_seq(&self.source)
    }

    pub fn lambda(&self) -> u32 {
        self.omegas.count_ones()
    }

    pub fn poly_degree(&self) -> i64 {
        self.n.iter().map(|&x| x as i64).sum()
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ{}", self.w)?;
        if self.omegas != 0 {
            let idx: Vec<String> = mask_indices(self.omegas).iter().map(|r| r.to_string()).collect();
            write!(f, "({{{}}})", idx.join(","))?;
        }
        if self.n.iter().any(|&x| x != 0) {
            let n: Vec<String> = self.n.iter().map(|x| x.to_string()).collect();
            write!(f, "·Y^({})", n.join(","))?;
        }
        write!(f, "·1_{}", show_seq(&self.source))
    }
}

pub type BasisExpansion = BTreeMap<BasisKey, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct TableId {
    source: Vec<Scalar>,
    target: Vec<Scalar>,
    k: usize,
    degree: i64,
}

/// Actions of all basis keys of one homogeneous block on a probe set,
/// with a selected invertible square subsystem.
#[derive(Debug)]
pub struct BasisOperatorTable {
    pub keys: Vec<BasisKey>,
    words: Vec<KlrWord>,
    pub probes: Vec<SuperPoly>,
    rows: Vec<(usize, Mono)>,
    inv: Vec<Vec<u64>>,
}

impl BasisOperatorTable {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.keys.len()
    }
}

pub struct KlrAlg {
    pub quiver: Quiver,
    pub d: usize,
    /// The multiset ν as a sorted label list.
    pub labels: Vec<Scalar>,
    tables: Mutex<HashMap<TableId, Arc<BasisOperatorTable>>>,
}

impl fmt::Debug for KlrAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KlrAlg(ν = {})", show_seq(&self.labels))
    }
}

impl KlrAlg {
    pub fn new(quiver: Quiver, mut labels: Vec<Scalar>) -> Result<Self> {
        for l in &labels {
            if !quiver.vertices.contains(l) {
                return Err(Error::InvalidParam(format!("label {} is not a vertex", show(l))));
            }
        }
        if labels.is_empty() || labels.len() > 8 {
            return Err(Error::InvalidParam("need 1 ≤ |ν| ≤ 8".into()));
        }
        labels.sort();
        let d = labels.len();
        Ok(KlrAlg { quiver, d, labels, tables: Mutex::new(HashMap::new()) })
    }

    /// ν is read off from the point a.
    pub fn from_params(p: &ParamSet) -> Result<Self> {
        Self::new(p.quiver(), p.a.clone())
    }

    pub fn h(&self, a: &Scalar, b: &Scalar) -> u32 {
        self.quiver.h(a, b)
    }

    /// Seq(ν) in lexicographic order.
    pub fn seqs(&self) -> Vec<Vec<Scalar>> {
        let mut cur = self.labels.clone();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }

    pub fn ring(&self, label: &[Scalar]) -> Ring {
        Ring::Klr(label.to_vec())
    }

    fn check_label(&self, label: &[Scalar]) -> Result<()> {
        let mut s = label.to_vec();
        s.sort();
        if s != self.labels {
            return Err(Error::LabelMismatch(format!("{} is not in Seq(ν)", show_seq(label))));
        }
        Ok(())
    }

    /// 𝒫_{i_r,i_{r+1}}(Y_r, Y_{r+1}) in the component of `label`.
    pub fn p_poly(&self, label: &[Scalar], r: usize) -> SuperPoly {
        let ring = self.ring(label);
        let h = self.h(&label[r - 1], &label[r]);
        let mut base = SuperPoly::var(ring.clone(), self.d, r);
        base.add_assign_scaled(&SuperPoly::var(ring, self.d, r + 1), &sc(-1));
        base.pow(h)
    }

    /// 𝒬_{a,b}(Y_u, Y_v) in the component of `label`.
    pub fn q_poly(&self, label: &[Scalar], a: &Scalar, b: &Scalar, u: usize, v: usize) -> SuperPoly {
        let ring = self.ring(label);
        let mut diff = SuperPoly::var(ring.clone(), self.d, u);
        diff.add_assign_scaled(&SuperPoly::var(ring, self.d, v), &sc(-1));
        let h1 = self.h(a, b);
        let h2 = self.h(b, a);
        let p = diff.pow(h1 + h2);
        if h2 % 2 == 1 {
            p.neg()
        } else {
            p
        }
    }

    pub fn act_letter(&self, letter: &KlrLetter, f: &SuperPoly) -> Result<SuperPoly> {
        let label = f.ring.label().ok_or_else(|| Error::RingMismatch("KLR action needs a KLR component".into()))?;
        match letter {
            KlrLetter::Dot(r) => {
                if *r == 0 || *r > self.d {
                    return Err(Error::IndexOutOfRange(format!("Y_{r}")));
                }
                Ok(f.mul_var(*r, 1))
            }
            KlrLetter::FloatingDot => Ok(f.mul_ext_left(1)),
            KlrLetter::Tau(r) => {
                if *r == 0 || *r >= self.d {
                    return Err(Error::IndexOutOfRange(format!("τ_{r}")));
                }
                if label[r - 1] == label[*r] {
                    Ok(f.divided_difference(*r))
                } else {
                    let p = self.p_poly(label, *r);
                    Ok(klr_simple(*r, &p.mul_unchecked(f)))
                }
            }
        }
    }

    pub fn act(&self, word: &KlrWord, f: &SuperPoly) -> Result<SuperPoly> {
        if f.ring.label() != Some(&word.source[..]) {
            return Err(Error::LabelMismatch(format!("word starts at 1_{} but the input is {:?}", show_seq(&word.source), f.ring)));
        }
        if f.d != self.d {
            return Err(Error::RingMismatch(format!("strand count {} vs {}", f.d, self.d)));
        }
        let mut g = f.clone();
        for l in word.letters.iter().rev() {
            g = self.act_letter(l, &g)?;
            if g.is_zero() {
                return Ok(SuperPoly::zero(self.ring(&word.target()), self.d));
            }
        }
        Ok(g)
    }

    /// Action of an element; words from other idempotents act by zero.
    pub fn act_element(&self, e: &KlrElement, f: &SuperPoly) -> Result<BTreeMap<Vec<Scalar>, SuperPoly>> {
        let mut out: BTreeMap<Vec<Scalar>, SuperPoly> = BTreeMap::new();
        let label = f.ring.label().ok_or_else(|| Error::RingMismatch("KLR action needs a KLR component".into()))?;
        for (w, c) in &e.terms {
            if w.source != label {
                continue;
            }
            let g = self.act(w, f)?;
            let t = w.target();
            let slot = out.entry(t.clone()).or_insert_with(|| SuperPoly::zero(self.ring(&t), self.d));
            slot.add_assign_scaled(&g, c);
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Degree of a word for deg Y = 2, deg Ω = −2 and crossings of degree
    /// −2 (equal labels) or 2h_{i,j}; the action is homogeneous for it.
    pub fn word_degree(&self, word: &KlrWord) -> i64 {
        let states = word.states();
        let mut deg = 0i64;
        for (l, st) in word.letters.iter().zip(&states) {
            deg += match l {
                KlrLetter::Dot(_) => 2,
                KlrLetter::FloatingDot => -2,
                KlrLetter::Tau(r) => {
                    let (a, b) = (&st[r - 1], &st[*r]);
                    if a == b {
                        -2
                    } else {
                        2 * self.h(a, b) as i64
                    }
                }
            };
        }
        deg
    }

    /// The word τ_{r_k}⋯Ω^{(v)}⋯τ_{r_1}·Yⁿ of a basis key, along the left-adjusted word of w.
    pub fn basis_word(&self, key: &BasisKey) -> Result<KlrWord> {
        let d = self.d;
        if key.w.d() != d || key.n.len() != d || key.n.iter().any(|&x| x < 0) || key.omegas >> d != 0 {
            return Err(Error::InvalidBasisKey(key.to_string()));
        }
        self.check_label(&key.source).map_err(|_| Error::InvalidBasisKey(key.to_string()))?;
        // application order p_1, …, p_k
        let mut steps = key.w.left_adjusted_word();
        steps.reverse();
        let k = steps.len();
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
        for r in mask_indices(key.omegas) {
            let (mut pos, mut best, mut at) = (r, r, 0);
            for (j, &p) in steps.iter().enumerate() {
                if pos == p {
                    pos = p + 1;
                } else if pos == p + 1 {
                    pos = p;
                }
                if pos < best {
                    best = pos;
                    at = j + 1;
                }
            }
            slots[at].push(best);
        }
        let mut letters = Vec::new();
        for j in (0..=k).rev() {
            let mut vs = slots[j].clone();
            vs.sort_unstable();
            for v in vs {
                letters.extend((1..v).rev().map(KlrLetter::Tau));
                letters.push(KlrLetter::FloatingDot);
                letters.extend((1..v).map(KlrLetter::Tau));
            }
            if j > 0 {
                letters.push(KlrLetter::Tau(steps[j - 1]));
            }
        }
        for (r, &x) in key.n.iter().enumerate() {
            letters.extend(std::iter::repeat(KlrLetter::Dot(r + 1)).take(x as usize));
        }
        Ok(KlrWord::new(key.source.clone(), letters))
    }

    pub fn basis_element(&self, key: &BasisKey) -> Result<KlrElement> {
        Ok(KlrElement::from_word(self.basis_word(key)?))
    }

    pub fn from_basis(&self, exp: &BasisExpansion) -> Result<KlrElement> {
        let mut e = KlrElement::zero();
        for (k, c) in exp {
            e.add_term(self.basis_word(k)?, c.clone());
        }
        Ok(e)
    }

    /// Basis keys of one homogeneous block.
    fn block_keys(&self, source: &[Scalar], target: &[Scalar], k: usize, degree: i64) -> Result<Vec<BasisKey>> {
        let d = self.d;
        let mut keys = Vec::new();
        for w in Perm::all(d) {
            if w.act_seq(source) != target {
                continue;
            }
            for m in 0..(1u32 << d) {
                if m.count_ones() as usize != k {
                    continue;
                }
                let base = BasisKey { w: w.clone(), omegas: m, n: vec![0; d], source: source.to_vec() };
                let rem = degree - self.word_degree(&self.basis_word(&base)?);
                if rem < 0 || rem % 2 != 0 {
                    continue;
                }
                for n in exponents_of_degree(d, (rem / 2) as usize) {
                    keys.push(BasisKey { n, ..base.clone() });
                }
            }
        }
        Ok(keys)
    }

    fn probe_list(&self, source: &[Scalar], max_deg: usize) -> Vec<SuperPoly> {
        let ring = self.ring(source);
        let mut masks: Vec<u32> = (0..(1u32 << self.d)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut out = Vec::new();
        for e in 0..=max_deg {
            for &m in &masks {
                for ex in exponents_of_degree(self.d, e) {
                    out.push(SuperPoly::monomial(ring.clone(), self.d, ex, m, Scalar::one()));
                }
            }
        }
        out
    }

    fn build_table(&self, id: &TableId) -> Result<BasisOperatorTable> {
        let keys = self.block_keys(&id.source, &id.target, id.k, id.degree)?;
        let words: Vec<KlrWord> = keys.iter().map(|k| self.basis_word(k)).collect::<Result<_>>()?;
        if keys.is_empty() {
            return Ok(BasisOperatorTable { keys, words, probes: Vec::new(), rows: Vec::new(), inv: Vec::new() });
        }
        let max_n = keys.iter().map(|k| k.poly_degree()).max().unwrap_or(0) as usize;
        let cap = max_n + self.d * (self.d - 1) / 2 + 3;
        let all = self.probe_list(&id.source, cap);
        let mut ech = modp::ModEchelon::new();
        let mut rows = Vec::new();
        let mut square = Vec::new();
        let mut used = 0;
        for (pi, probe) in all.iter().enumerate() {
            used = pi + 1;
            let acts: Vec<SuperPoly> = words.par_iter().map(|w| self.act(w, probe)).collect::<Result<_>>()?;
            let monos: BTreeSet<Mono> = acts.iter().flat_map(|a| a.terms.keys().cloned()).collect();
            for mono in monos {
                let row: Vec<u64> = acts
                    .iter()
                    .map(|a| a.terms.get(&mono).map(|c| modp::from_scalar(c).unwrap_or(0)).unwrap_or(0))
                    .collect();
                if ech.insert(&row) {
                    rows.push((pi, mono));
                    square.push(row);
                }
            }
            if rows.len() == keys.len() {
                break;
            }
        }
        if rows.len() < keys.len() {
            return Err(Error::SingularTable(format!(
                "rank {} < {} keys for 1_{} → 1_{}, degree {}",
                rows.len(),
                keys.len(),
                show_seq(&id.source),
                show_seq(&id.target),
                id.degree
            )));
        }
        let inv = modp::inverse(&square).ok_or_else(|| Error::SingularTable("selected system is singular".into()))?;
        let probes = all[..used].to_vec();
        Ok(BasisOperatorTable { keys, words, probes, rows, inv })
    }

    fn table(&self, id: &TableId) -> Result<Arc<BasisOperatorTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(id) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.build_table(id)?);
        self.tables.lock().unwrap().insert(id.clone(), t.clone());
        Ok(t)
    }

    /// The table for one block, built on demand.
    pub fn operator_table(&self, source: &[Scalar], target: &[Scalar], k: usize, degree: i64) -> Result<Arc<BasisOperatorTable>> {
        self.check_label(source)?;
        self.check_label(target)?;
        self.table(&TableId { source: source.to_vec(), target: target.to_vec(), k, degree })
    }

    fn group_action(&self, words: &[(KlrWord, Scalar)], probe: &SuperPoly, target: &[Scalar]) -> Result<SuperPoly> {
        let mut acc = SuperPoly::zero(self.ring(target), self.d);
        for (w, c) in words {
            acc.add_assign_scaled(&self.act(w, probe)?, c);
        }
        Ok(acc)
    }

    fn solve_group(&self, id: &TableId, words: &[(KlrWord, Scalar)]) -> Result<BasisExpansion> {
        let table = self.table(id)?;
        let mut cache: HashMap<usize, SuperPoly> = HashMap::new();
        let mut coeffs: Option<Vec<Scalar>> = None;
        if !table.keys.is_empty() {
            let mut b = Vec::with_capacity(table.rows.len());
            let mut ok = true;
            for (pi, mono) in &table.rows {
                if !cache.contains_key(pi) {
                    cache.insert(*pi, self.group_action(words, &table.probes[*pi], &id.target)?);
                }
                let c = cache[pi].terms.get(mono).cloned().unwrap_or_else(Scalar::zero);
                match modp::from_scalar(&c) {
                    Some(x) => b.push(x),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let sol = modp::mat_vec(&table.inv, &b);
                coeffs = sol.into_iter().map(modp::reconstruct).collect();
            }
        }
        let mut exp = BasisExpansion::new();
        if let Some(c) = &coeffs {
            for (k, x) in table.keys.iter().zip(c) {
                if !x.is_zero() {
                    exp.insert(k.clone(), x.clone());
                }
            }
        }
        match self.verify_expansion(&table, &exp, words, &id.target)? {
            None => Ok(exp),
            Some(w) if coeffs.is_some() || table.keys.is_empty() => {
                let exact = self.solve_exact(&table, words, &id.target)?;
                match self.verify_expansion(&table, &exact, words, &id.target)? {
                    None => Ok(exact),
                    Some(w2) => Err(Error::DegreeBoundExceeded(format!("{w}; exact retry: {w2}"))),
                }
            }
            Some(_) => {
                let exact = self.solve_exact(&table, words, &id.target)?;
                match self.verify_expansion(&table, &exact, words, &id.target)? {
                    None => Ok(exact),
                    Some(w2) => Err(Error::DegreeBoundExceeded(w2)),
                }
            }
        }
    }

    fn solve_exact(&self, table: &BasisOperatorTable, words: &[(KlrWord, Scalar)], target: &[Scalar]) -> Result<BasisExpansion> {
        let mut exp = BasisExpansion::new();
        if table.keys.is_empty() {
            return Ok(exp);
        }
        let mut a = linalg::zeros(table.rows.len(), table.keys.len());
        let mut b = Vec::new();
        for (ri, (pi, mono)) in table.rows.iter().enumerate() {
            let probe = &table.probes[*pi];
            for (ci, w) in table.words.iter().enumerate() {
                a[ri][ci] = self.act(w, probe)?.terms.get(mono).cloned().unwrap_or_else(Scalar::zero);
            }
            b.push(self.group_action(words, probe, target)?.terms.get(mono).cloned().unwrap_or_else(Scalar::zero));
        }
        let inv = linalg::inverse(&a).ok_or_else(|| Error::SingularTable("exact system is singular".into()))?;
        for (k, x) in table.keys.iter().zip(linalg::mat_vec(&inv, &b)) {
            if !x.is_zero() {
                exp.insert(k.clone(), x);
            }
        }
        Ok(exp)
    }

    fn verify_expansion(
        &self,
        table: &BasisOperatorTable,
        exp: &BasisExpansion,
        words: &[(KlrWord, Scalar)],
        target: &[Scalar],
    ) -> Result<Option<String>> {
        let exp_words: Vec<(KlrWord, Scalar)> =
            exp.iter().map(|(k, c)| Ok((self.basis_word(k)?, c.clone()))).collect::<Result<_>>()?;
        let probes: Vec<SuperPoly> = if table.probes.is_empty() {
            let src = &words[0].0.source;
            self.probe_list(src, 2)
        } else {
            table.probes.clone()
        };
        for p in &probes {
            let lhs = self.group_action(words, p, target)?;
            let rhs = self.group_action(&exp_words, p, target)?;
            if lhs != rhs {
                return Ok(Some(format!("probe {p}: element gives {lhs}, expansion gives {rhs}")));
            }
        }
        Ok(None)
    }

    /// Expansion over the τ_w(I)Yⁿ basis. Words are grouped by homogeneous
    /// block; with a bound, keys with |n| above it are reported as errors.
    pub fn to_basis(&self, e: &KlrElement, deg_bound: Option<usize>) -> Result<BasisExpansion> {
        let mut groups: BTreeMap<(Vec<Scalar>, Vec<Scalar>, usize, i64), Vec<(KlrWord, Scalar)>> = BTreeMap::new();
        for (w, c) in &e.terms {
            self.check_label(&w.source)?;
            for l in &w.letters {
                match l {
                    KlrLetter::Tau(r) if *r == 0 || *r >= self.d => return Err(Error::IndexOutOfRange(format!("τ_{r}"))),
                    KlrLetter::Dot(r) if *r == 0 || *r > self.d => return Err(Error::IndexOutOfRange(format!("Y_{r}"))),
                    _ => {}
                }
            }
            let key = (w.source.clone(), w.target(), w.floating_dots(), self.word_degree(w));
            groups.entry(key).or_default().push((w.clone(), c.clone()));
        }
        let parts: Vec<BasisExpansion> = groups
            .into_par_iter()
            .map(|((source, target, k, degree), words)| self.solve_group(&TableId { source, target, k, degree }, &words))
            .collect::<Result<_>>()?;
        let mut out = BasisExpansion::new();
        for p in parts {
            for (k, c) in p {
                let slot = out.entry(k).or_insert_with(Scalar::zero);
                *slot += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        if let Some(b) = deg_bound {
            if let Some((k, _)) = out.iter().find(|(k, _)| k.poly_degree() > b as i64) {
                return Err(Error::DegreeBoundExceeded(format!("key {k} exceeds |n| ≤ {b}")));
            }
        }
        Ok(out)
    }

    /// d_Λ on words: each floating dot becomes (−Y_1)^{Λ_i}, i the label of the first strand there.
    pub fn d_lambda_words(&self, e: &KlrElement, lam: &Multiplicities) -> KlrElement {
        let mut out = KlrElement::zero();
        for (w, c) in &e.terms {
            let states = w.states();
            let mut seen = 0usize;
            for (pos, l) in w.letters.iter().enumerate() {
                if *l != KlrLetter::FloatingDot {
                    continue;
                }
                let power = lam.get(&states[pos][0]).copied().unwrap_or(0);
                let mut letters = w.letters[..pos].to_vec();
                letters.extend(std::iter::repeat(KlrLetter::Dot(1)).take(power));
                letters.extend(w.letters[pos + 1..].iter().cloned());
                let sign = if (power + seen) % 2 == 0 { Scalar::one() } else { sc(-1) };
                out.add_term(KlrWord::new(w.source.clone(), letters), c * sign);
                seen += 1;
            }
        }
        out
    }

    pub fn d_lambda(&self, e: &KlrElement, lam: &Multiplicities) -> Result<BasisExpansion> {
        self.to_basis(&self.d_lambda_words(e, lam), None)
    }

    /// Probes Yⁿ Ω^S 1_i with |n| ≤ deg and every S.
    pub fn probes(&self, source: &[Scalar], deg: usize) -> Vec<SuperPoly> {
        self.probe_list(source, deg)
    }

    /// Every basis key of 1_j ℛ(ν) 1_i summed over all i, j with |n| ≤ max_n.
    pub fn all_keys(&self, max_n: usize) -> Vec<BasisKey> {
        let mut out = Vec::new();
        for s in self.seqs() {
            for w in Perm::all(self.d) {
                for m in 0..(1u32 << self.d) {
                    for n in exponents_up_to(self.d, max_n) {
                        out.push(BasisKey { w: w.clone(), omegas: m, n, source: s.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn random_key<R: Rng>(&self, rng: &mut R, max_n: usize) -> BasisKey {
        let seqs = self.seqs();
        let perms = Perm::all(self.d);
        let ns = exponents_up_to(self.d, max_n);
        BasisKey {
            w: perms[rng.gen_range(0..perms.len())].clone(),
            omegas: rng.gen_range(0..(1u32 << self.d)),
            n: ns[rng.gen_range(0..ns.len())].clone(),
            source: seqs[rng.gen_range(0..seqs.len())].clone(),
        }
    }

    /// dim R^Λ(ν) for the non-enhanced algebra, summed over degrees ≤ deg_cap.
    pub fn cyclotomic_dim(&self, lam: &Multiplicities, deg_cap: i64) -> Result<CyclotomicDim> {
        let seqs = self.seqs();
        let perms = Perm::all(self.d);
        let mut gens: BTreeMap<(Vec<Scalar>, Vec<Scalar>), Vec<(i64, BasisExpansion)>> = BTreeMap::new();
        for s in &seqs {
            for v in &perms {
                let right = KlrWord::new(s.clone(), v.reduced_word().into_iter().map(KlrLetter::Tau).collect());
                let mid = right.target();
                let power = lam.get(&mid[0]).copied().unwrap_or(0);
                for u in &perms {
                    let mut letters: Vec<KlrLetter> = u.reduced_word().into_iter().map(KlrLetter::Tau).collect();
                    letters.extend(std::iter::repeat(KlrLetter::Dot(1)).take(power));
                    letters.extend(right.letters.iter().cloned());
                    let w = KlrWord::new(s.clone(), letters);
                    let deg = self.word_degree(&w);
                    let exp = self.to_basis(&KlrElement::from_word(w.clone()), None)?;
                    gens.entry((s.clone(), w.target())).or_default().push((deg, exp));
                }
            }
        }
        let mut total = 0usize;
        let mut beyond = 0usize;
        let mut survivors = Vec::new();
        for s in &seqs {
            for t in &seqs {
                let block_gens = gens.get(&(s.clone(), t.clone())).cloned().unwrap_or_default();
                let base: Vec<i64> = perms
                    .iter()
                    .filter(|w| w.act_seq(s) == *t)
                    .map(|w| {
                        let k = BasisKey { w: w.clone(), omegas: 0, n: vec![0; self.d], source: s.clone() };
                        self.word_degree(&self.basis_word(&k).unwrap())
                    })
                    .collect();
                let Some(&lo) = base.iter().min() else { continue };
                for deg in lo..=deg_cap + 2 {
                    let keys = self.block_keys(s, t, 0, deg)?;
                    if keys.is_empty() {
                        continue;
                    }
                    let index: HashMap<&BasisKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
                    let mut ech = Echelon::new();
                    for (gd, exp) in &block_gens {
                        if *gd > deg || (deg - gd) % 2 != 0 {
                            continue;
                        }
                        for m in exponents_of_degree(self.d, ((deg - gd) / 2) as usize) {
                            let row: Vec<(usize, Scalar)> = exp
                                .iter()
                                .map(|(k, c)| {
                                    let n: Vec<i32> = k.n.iter().zip(&m).map(|(a, b)| a + b).collect();
                                    let shifted = BasisKey { n, ..k.clone() };
                                    (index[&shifted], c.clone())
                                })
                                .collect();
                            ech.insert(&row);
                        }
                    }
                    let piv: BTreeSet<usize> = ech.pivot_columns().into_iter().collect();
                    let free: Vec<BasisKey> = keys.iter().enumerate().filter(|(i, _)| !piv.contains(i)).map(|(_, k)| k.clone()).collect();
                    if deg <= deg_cap {
                        total += free.len();
                        survivors.extend(free);
                    } else {
                        beyond += free.len();
                    }
                }
            }
        }
        if beyond != 0 {
            return Err(Error::NotStabilized(format!("{beyond} quotient dimensions above degree {deg_cap}")));
        }
        Ok(CyclotomicDim { dim: total, keys: survivors })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicDim {
    pub dim: usize,
    /// Basis keys spanning the quotient.
    pub keys: Vec<BasisKey>,
}

/// A KLR relation: an element that must act by zero.
#[derive(Debug, Clone)]
pub struct KlrRelation {
    pub id: String,
    pub element: KlrElement,
}

fn word_el(source: &[Scalar], letters: Vec<KlrLetter>) -> KlrElement {
    KlrElement::from_word(KlrWord::new(source.to_vec(), letters))
}

/// All local relations starting at the idempotent `seq`.
pub fn klr_relations(alg: &KlrAlg, seq: &[Scalar]) -> Result<Vec<KlrRelation>> {
    use KlrLetter::*;
    let d = seq.len();
    let id = |name: String| format!("{}.{}", show_seq(seq), name);
    let mut out = Vec::new();
    let one = word_el(seq, vec![]);
    for r in 1..d {
        let (a, b) = (&seq[r - 1], &seq[r]);
        let mut r2 = word_el(seq, vec![Tau(r), Tau(r)]);
        if a != b {
            r2 = r2.sub(&KlrElement::from_poly(seq, &alg.q_poly(seq, a, b, r, r + 1))?);
        }
        out.push(KlrRelation { id: id(format!("R2.{r}")), element: r2 });
        let slide1 = word_el(seq, vec![Tau(r), Dot(r)]).sub(&word_el(seq, vec![Dot(r + 1), Tau(r)]));
        let slide2 = word_el(seq, vec![Tau(r), Dot(r + 1)]).sub(&word_el(seq, vec![Dot(r), Tau(r)]));
        if a == b {
            out.push(KlrRelation { id: id(format!("nh1a.{r}")), element: slide1.sub(&one) });
            let mut e = slide2;
            e.add_scaled(&one, &Scalar::one());
            out.push(KlrRelation { id: id(format!("nh1b.{r}")), element: e });
        } else {
            out.push(KlrRelation { id: id(format!("dotslide_a.{r}")), element: slide1 });
            out.push(KlrRelation { id: id(format!("dotslide_b.{r}")), element: slide2 });
        }
        for s in 1..=d {
            if s != r && s != r + 1 {
                let e = word_el(seq, vec![Tau(r), Dot(s)]).sub(&word_el(seq, vec![Dot(s), Tau(r)]));
                out.push(KlrRelation { id: id(format!("far_dot.{r}.{s}")), element: e });
            }
        }
        for s in r + 2..d {
            let e = word_el(seq, vec![Tau(r), Tau(s)]).sub(&word_el(seq, vec![Tau(s), Tau(r)]));
            out.push(KlrRelation { id: id(format!("far_tau.{r}.{s}")), element: e });
        }
        if r >= 2 {
            let e = word_el(seq, vec![Tau(r), FloatingDot]).sub(&word_el(seq, vec![FloatingDot, Tau(r)]));
            out.push(KlrRelation { id: id(format!("omega_tau.{r}")), element: e });
        }
        if r + 1 < d {
            let c = &seq[r + 1];
            let mut e = word_el(seq, vec![Tau(r), Tau(r + 1), Tau(r)]).sub(&word_el(seq, vec![Tau(r + 1), Tau(r), Tau(r + 1)]));
            if a == c && a != b {
                // (𝒬_{a,b}(Y_{r+2},Y_{r+1}) − 𝒬_{a,b}(Y_r,Y_{r+1}))/(Y_{r+2} − Y_r)
                let h1 = alg.h(a, b);
                let h2 = alg.h(b, a);
                let hh = (h1 + h2) as i64;
                let ring = alg.ring(seq);
                let mut quot = SuperPoly::zero(ring, d);
                for al in 1..=hh {
                    let binom = binomial(hh, al);
                    let sign = if (hh - al + h2 as i64) % 2 == 0 { 1 } else { -1 };
                    for t in 0..al {
                        let mut ex = vec![0; d];
                        ex[r + 1] = t as i32;
                        ex[r - 1] = (al - 1 - t) as i32;
                        ex[r] = (hh - al) as i32;
                        quot.add_term(ex, 0, sc(sign * binom));
                    }
                }
                e = e.sub(&KlrElement::from_poly(seq, &quot)?);
                out.push(KlrRelation { id: id(format!("R3_2.{r}")), element: e });
            } else {
                out.push(KlrRelation { id: id(format!("R3_1.{r}")), element: e });
            }
        }
    }
    out.push(KlrRelation { id: id("ExtR2".into()), element: word_el(seq, vec![FloatingDot, FloatingDot]) });
    for s in 1..=d {
        let e = word_el(seq, vec![FloatingDot, Dot(s)]).sub(&word_el(seq, vec![Dot(s), FloatingDot]));
        out.push(KlrRelation { id: id(format!("omega_dot.{s}")), element: e });
    }
    if d >= 2 {
        let mut e = word_el(seq, vec![FloatingDot, Tau(1), FloatingDot, Tau(1)]);
        e.add_scaled(&word_el(seq, vec![Tau(1), FloatingDot, Tau(1), FloatingDot]), &Scalar::one());
        out.push(KlrRelation { id: id("extrarel".into()), element: e });
    }
    Ok(out)
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Checks one relation as an operator identity on the given probes.
pub fn check_klr_relation(alg: &KlrAlg, rel: &KlrRelation, probes: &[SuperPoly]) -> CheckRecord {
    CheckRecord::timed(format!("klr.d{}.{}", alg.d, rel.id), || {
        for p in probes {
            let out = alg.act_element(&rel.element, p)?;
            if let Some((t, v)) = out.iter().next() {
                return Ok(Some(format!("probe {p} ↦ {v} in 1_{}", show_seq(t))));
            }
        }
        Ok(None)
    })
}

/// Every local relation for every idempotent of Seq(ν), on probes of degree ≤ max_deg.
pub fn verify_klr_relations(alg: &KlrAlg, max_deg: usize) -> Result<Report> {
    let mut jobs = Vec::new();
    for s in alg.seqs() {
        let probes = alg.probes(&s, max_deg);
        for rel in klr_relations(alg, &s)? {
            jobs.push((rel, probes.clone()));
        }
    }
    let recs: Vec<CheckRecord> = jobs.par_iter().map(|(rel, probes)| check_klr_relation(alg, rel, probes)).collect();
    Ok(Report::from_records(recs))
}

/// d_Λ² = 0 on every basis element with |n| ≤ max_n, and d_Λ lowers the number of floating dots by one.
pub fn verify_d_lambda(alg: &KlrAlg, lam: &Multiplicities, max_n: usize) -> Report {
    let id = format!("klr.d{}.nu{}.dlambda", alg.d, show_seq(&alg.labels));
    let keys = alg.all_keys(max_n);
    let square = CheckRecord::timed(format!("{id}.square"), || {
        let bad: Vec<String> = keys
            .par_iter()
            .map(|k| -> Result<Option<String>> {
                let once = alg.d_lambda_words(&alg.basis_element(k)?, lam);
                let twice = alg.to_basis(&alg.d_lambda_words(&once, lam), None)?;
                Ok((!twice.is_empty()).then(|| format!("d²({k}) ≠ 0")))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(bad.into_iter().next())
    });
    let grading = CheckRecord::timed(format!("{id}.grading"), || {
        for k in &keys {
            for (key, _) in alg.d_lambda(&alg.basis_element(k)?, lam)? {
                if key.lambda() + 1 != k.lambda() {
                    return Ok(Some(format!("d({k}) contains {key}")));
                }
            }
        }
        Ok(None)
    });
    Report::from_records(vec![square, grading])
}

/// Sorted label multisets of size d on the quiver's vertices.
pub fn label_multisets(quiver: &Quiver, d: usize) -> Vec<Vec<Scalar>> {
    let verts = &quiver.vertices;
    let mut multisets: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &multisets {
            for (i, v) in verts.iter().enumerate() {
                if m.last().map_or(true, |l| verts.iter().position(|x| x == l).unwrap() <= i) {
                    let mut m2 = m.clone();
                    m2.push(v.clone());
                    next.push(m2);
                }
            }
        }
        multisets = next;
    }
    multisets
}

/// The relation suite over every ν with |ν| = d supported on the quiver's vertices.
pub fn verify_klr_relations_all(quiver: &Quiver, d: usize, max_deg: usize) -> Result<Report> {
    let mut report = Report::new();
    for labels in label_multisets(quiver, d) {
        let alg = KlrAlg::new(quiver.clone(), labels)?;
        report.extend(verify_klr_relations(&alg, max_deg)?);
    }
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalars_params::{build_quiver_degenerate, build_quiver_q};
    use crate::superrings::sym_act_klr;
    use rand::SeedableRng;
    use KlrLetter::*;

    fn deg_alg(labels: &[i64]) -> KlrAlg {
        let q = build_quiver_degenerate(&[sc(0), sc(1), sc(2)]);
        KlrAlg::new(q, labels.iter().map(|&x| sc(x)).collect()).unwrap()
    }

    fn lab(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| sc(x)).collect()
    }

    #[test]
    fn action_examples() {
        let a = deg_alg(&[0, 0]);
        let one = SuperPoly::one(a.ring(&lab(&[0, 0])), 2);
        assert!(a.act(&KlrWord::new(lab(&[0, 0]), vec![Tau(1)]), &one).unwrap().is_zero());
        // an arrow 1 → 0: source evaluation of 𝒫 gives Y_2 − Y_1 in the target
        let b = deg_alg(&[0, 1]);
        let one = SuperPoly::one(b.ring(&lab(&[1, 0])), 2);
        let got = b.act(&KlrWord::new(lab(&[1, 0]), vec![Tau(1)]), &one).unwrap();
        let tr = b.ring(&lab(&[0, 1]));
        let mut expect = SuperPoly::var(tr.clone(), 2, 2);
        expect.add_assign_scaled(&SuperPoly::var(tr.clone(), 2, 1), &sc(-1));
        assert_eq!(got, expect);
        let c = deg_alg(&[0, 2]);
        let one = SuperPoly::one(c.ring(&lab(&[0, 2])), 2);
        let got = c.act(&KlrWord::new(lab(&[0, 2]), vec![Tau(1)]), &one).unwrap();
        assert_eq!(got, SuperPoly::one(c.ring(&lab(&[2, 0])), 2));
        assert!(matches!(
            c.act(&KlrWord::new(lab(&[2, 0]), vec![Tau(1)]), &one),
            Err(Error::LabelMismatch(_))
        ));
    }

    #[test]
    fn basis_word_examples() {
        let a = deg_alg(&[0, 0, 0]);
        let s = lab(&[0, 0, 0]);
        let key = |w: Perm, m: u32, n: Vec<i32>| BasisKey { w, omegas: m, n, source: s.clone() };
        let id = Perm::identity(3);
        assert_eq!(a.basis_word(&key(id.clone(), 1, vec![0; 3])).unwrap().letters, vec![FloatingDot]);
        assert_eq!(a.basis_word(&key(id.clone(), 2, vec![0; 3])).unwrap().letters, vec![Tau(1), FloatingDot, Tau(1)]);
        assert_eq!(a.basis_word(&key(Perm::simple(3, 1), 0, vec![1, 0, 0])).unwrap().letters, vec![Tau(1), Dot(1)]);
        assert!(matches!(a.basis_word(&key(id, 8, vec![0; 3])), Err(Error::InvalidBasisKey(_))));
    }

    #[test]
    fn expansion_examples() {
        let a = deg_alg(&[0, 0]);
        let s = lab(&[0, 0]);
        let e = word_el(&s, vec![Tau(1), Tau(1)]);
        assert!(a.to_basis(&e, None).unwrap().is_empty());
        let e = word_el(&s, vec![Tau(1), Dot(2)]).sub(&word_el(&s, vec![Dot(1), Tau(1)]));
        let exp = a.to_basis(&e, None).unwrap();
        let unit = BasisKey { w: Perm::identity(2), omegas: 0, n: vec![0, 0], source: s.clone() };
        assert_eq!(exp, BTreeMap::from([(unit, sc(-1))]));
        assert!(a.to_basis(&word_el(&s, vec![FloatingDot, FloatingDot]), None).unwrap().is_empty());
        let b = deg_alg(&[0, 1]);
        let s = lab(&[0, 1]);
        let exp = b.to_basis(&word_el(&s, vec![Tau(1), Tau(1)]), None).unwrap();
        let mk = |n: Vec<i32>| BasisKey { w: Perm::identity(2), omegas: 0, n, source: s.clone() };
        // the arrow runs 1 → 0, so 𝒬_{0,1}(Y_1,Y_2) = Y_2 − Y_1
        assert_eq!(exp, BTreeMap::from([(mk(vec![1, 0]), sc(-1)), (mk(vec![0, 1]), sc(1))]));
    }

    #[test]
    fn round_trip_and_full_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for labels in [vec![0, 0], vec![0, 1], vec![0, 0, 1], vec![0, 1, 2]] {
            let a = deg_alg(&labels);
            for _ in 0..8 {
                let k = a.random_key(&mut rng, 2);
                let exp = a.to_basis(&a.basis_element(&k).unwrap(), None).unwrap();
                assert_eq!(exp, BTreeMap::from([(k.clone(), sc(1))]), "{k}");
            }
        }
    }

    #[test]
    fn d_lambda_examples() {
        let a = deg_alg(&[0, 1]);
        let s = lab(&[1, 0]);
        let lam: Multiplicities = BTreeMap::from([(sc(0), 1), (sc(1), 2)]);
        let e = a.d_lambda(&word_el(&s, vec![FloatingDot]), &lam).unwrap();
        let k = BasisKey { w: Perm::identity(2), omegas: 0, n: vec![2, 0], source: s.clone() };
        assert_eq!(e, BTreeMap::from([(k, sc(1))]));
        assert!(a.d_lambda(&word_el(&s, vec![Tau(1)]), &lam).unwrap().is_empty());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let k = a.random_key(&mut rng, 2);
            let once = a.d_lambda_words(&a.basis_element(&k).unwrap(), &lam);
            let twice = a.d_lambda_words(&once, &lam);
            assert!(a.to_basis(&twice, None).unwrap().is_empty());
            for (key, _) in a.to_basis(&once, None).unwrap() {
                assert_eq!(key.lambda() + 1, k.lambda());
            }
        }
    }

    #[test]
    fn relation_suites() {
        let q = build_quiver_degenerate(&[sc(0), sc(1)]);
        let r = verify_klr_relations_all(&q, 3, 2).unwrap();
        assert!(r.all_pass(), "{:#?}", r.failures());
        let q = build_quiver_q(&[sc(1), sc(2), sc(4)], &sc(2));
        let r = verify_klr_relations_all(&q, 3, 1).unwrap();
        assert!(r.all_pass(), "{:#?}", r.failures());
    }

    #[test]
    fn perturbed_relation_fails() {
        let a = deg_alg(&[0, 0]);
        let s = lab(&[0, 0]);
        let bad = KlrRelation { id: "perturbed".into(), element: word_el(&s, vec![Tau(1), Dot(2)]).sub(&word_el(&s, vec![Dot(1), Tau(1)])) };
        let rec = check_klr_relation(&a, &bad, &a.probes(&s, 1));
        assert_eq!(rec.status, Status::Fail);
    }

    #[test]
    fn cyclotomic_examples() {
        let a = deg_alg(&[0]);
        let lam: Multiplicities = BTreeMap::from([(sc(0), 3)]);
        assert_eq!(a.cyclotomic_dim(&lam, 10).unwrap().dim, 3);
        let lam0: Multiplicities = BTreeMap::new();
        assert_eq!(a.cyclotomic_dim(&lam0, 4).unwrap().dim, 0);
    }

    #[test]
    fn symmetric_action_agrees_with_crossings_for_distinct_unlinked_labels() {
        let a = deg_alg(&[0, 2]);
        let s = lab(&[0, 2]);
        let f = SuperPoly::monomial(a.ring(&s), 2, vec![2, 1], 1, sc(1));
        let got = a.act(&KlrWord::new(s, vec![Tau(1)]), &f).unwrap();
        assert_eq!(got, sym_act_klr(&Perm::simple(2, 1), &f).unwrap());
    }
}
