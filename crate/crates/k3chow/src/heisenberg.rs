//! Nakajima-style creation/annihilation calculus on a Fock space with
//! tautological coefficients, used to cross-check the lowering-operator
//! machinery behind the nested-scheme recursion at small `n`.
//!
//! A basis class is a multiset of parts `n_1 >= ... >= n_l > 0` together
//! with a coefficient class on `X^(l+k)`: one "slot" factor per part,
//! invariant under transpositions of slots with equal parts, plus `k` open
//! (inert) factors. Creation inserts a part whose slot is tied by a diagonal
//! to a fresh open factor; annihilation removes a matching part and exposes
//! its slot as a fresh open factor.
//!
//! Convention, fixed here once: the crossing coefficient of `q_{-i}` past a
//! creation operator of the same index is `-i`, which makes the commutators
//! satisfy `[q_a, q_b] = a·δ_{a+b,0}·contraction` with `contraction` the
//! operator inserting a diagonal-tied pair of open factors. Injectivity
//! conclusions do not depend on this choice of sign.

use crate::partition::{Dec, Part};
use crate::rational::{q, Q};
use crate::surface::SurfaceModel;
use crate::taut::{self, TautClass};
use crate::Error;
use num::traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// The pairing underlying the commutation relations: multiply by the
/// diagonal of `(r, s)` and integrate out `s`.
pub fn contraction(gamma: &TautClass, r: usize, s: usize) -> Result<TautClass, Error> {
    if r == s {
        return Err(Error::invalid_factor("contraction needs distinct factors"));
    }
    let d = taut::diagonal(gamma.model().clone(), gamma.arity(), r, s)?;
    gamma.mul(&d)?.pushforward_forget(s)
}

/// A sum of Fock basis classes with a common open-factor count.
#[derive(Clone)]
pub struct FockState {
    model: Arc<SurfaceModel>,
    open: usize,
    /// parts (descending) -> coefficient class on `X^(len(parts)+open)`.
    comps: BTreeMap<Vec<u32>, TautClass>,
}

impl PartialEq for FockState {
    fn eq(&self, other: &Self) -> bool {
        self.open == other.open && self.model == other.model && self.comps == other.comps
    }
}
impl Eq for FockState {}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockState(open={})", self.open)?;
        for (parts, gamma) in &self.comps {
            write!(f, " q{parts:?}[{gamma}]")?;
        }
        Ok(())
    }
}

/// All slot permutations fixing the open factors and preserving parts.
fn slot_symmetry(parts: &[u32], arity: usize) -> Vec<Vec<usize>> {
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
    let mut i = 0;
    while i < parts.len() {
        let mut j = i + 1;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        runs.push((i, j - i));
        i = j;
    }
    let mut perms: Vec<Vec<usize>> = vec![(0..arity).collect()];
    for (start, len) in runs {
        if len < 2 {
            continue;
        }
        let idx: Vec<usize> = (start..start + len).collect();
        let mut next = Vec::new();
        for base in &perms {
            for p in permutations(&idx) {
                let mut perm = base.clone();
                for (a, b) in idx.iter().zip(p.iter()) {
                    perm[*a] = base[*b];
                }
                next.push(perm);
            }
        }
        perms = next;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

impl FockState {
    pub fn vacuum(model: Arc<SurfaceModel>, open: usize) -> FockState {
        let mut comps = BTreeMap::new();
        comps.insert(Vec::new(), TautClass::one(model.clone(), open));
        FockState { model, open, comps }
    }

    pub fn zero(model: Arc<SurfaceModel>, open: usize) -> FockState {
        FockState {
            model,
            open,
            comps: BTreeMap::new(),
        }
    }

    /// A basis class `q_{n_1}...q_{n_l}(gamma)·v`. The coefficient class is
    /// symmetrized over slots carrying equal parts, as the basis demands.
    pub fn basis(
        model: Arc<SurfaceModel>,
        parts: Vec<u32>,
        gamma: TautClass,
        open: usize,
    ) -> Result<FockState, Error> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::input("parts must be positive"));
        }
        let mut sorted = parts.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted != parts {
            return Err(Error::input("parts must be sorted descending"));
        }
        if gamma.arity() != parts.len() + open {
            return Err(Error::shape(format!(
                "coefficient class has arity {}, expected {}",
                gamma.arity(),
                parts.len() + open
            )));
        }
        let mut state = FockState::zero(model, open);
        state.push(parts, gamma);
        Ok(state)
    }

    fn push(&mut self, parts: Vec<u32>, gamma: TautClass) {
        if gamma.is_zero() {
            return;
        }
        let perms = slot_symmetry(&parts, gamma.arity());
        let scale = q(1) / q(perms.len() as i64);
        let mut sym = TautClass::zero(self.model.clone(), gamma.arity());
        for perm in &perms {
            sym = sym.add(&gamma.permute(perm)).expect("same shape");
        }
        let sym = sym.scale(&scale);
        if sym.is_zero() {
            return;
        }
        match self.comps.entry(parts) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(sym);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = o.get().add(&sym).expect("same shape");
                if merged.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
    }

    pub fn open_factors(&self) -> usize {
        self.open
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Total part weight; `None` when mixed or empty.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.comps.keys().map(|p| p.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<u32>, &TautClass)> {
        self.comps.iter()
    }

    /// The coefficient of the vacuum component, if any.
    pub fn vacuum_part(&self) -> Option<&TautClass> {
        self.comps.get(&Vec::new())
    }

    pub fn add(&self, other: &FockState) -> Result<FockState, Error> {
        if self.open != other.open || self.model != other.model {
            return Err(Error::shape("states have different open factor counts"));
        }
        let mut out = self.clone();
        for (parts, gamma) in &other.comps {
            out.push(parts.clone(), gamma.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FockState) -> Result<FockState, Error> {
        self.add(&other.scale(&-q(1)))
    }

    pub fn scale(&self, by: &Q) -> FockState {
        let mut out = FockState::zero(self.model.clone(), self.open);
        if by.is_zero() {
            return out;
        }
        for (parts, gamma) in &self.comps {
            out.comps.insert(parts.clone(), gamma.scale(by));
        }
        out
    }

    /// Swaps the two most recently created open factors, aligning operator
    /// bookkeeping when comparing compositions applied in opposite order.
    fn swap_last_two_opens(&self) -> FockState {
        assert!(self.open >= 2);
        let mut out = FockState::zero(self.model.clone(), self.open);
        for (parts, gamma) in &self.comps {
            let ar = gamma.arity();
            let mut perm: Vec<usize> = (0..ar).collect();
            perm.swap(ar - 1, ar - 2);
            out.push(parts.clone(), gamma.permute(&perm));
        }
        out
    }
}

/// Applies the creation operator `q_i` (operator form): a new part whose
/// slot is tied by a diagonal to a fresh open factor appended last.
pub fn apply_raising(i: u32, state: &FockState) -> Result<FockState, Error> {
    if i == 0 {
        return Err(Error::input("operator index must be nonzero"));
    }
    let mut out = FockState::zero(state.model.clone(), state.open + 1);
    for (parts, gamma) in &state.comps {
        let l = parts.len();
        let jins = parts.iter().position(|&p| p < i).unwrap_or(l);
        let mut new_parts = parts.clone();
        new_parts.insert(jins, i);
        // Insert the slot, then the open factor at the very end, and tie
        // them with a diagonal.
        let with_slot = gamma.pullback_insert(jins)?;
        let with_open = with_slot.pullback_insert(with_slot.arity())?;
        let last = with_open.arity() - 1;
        let tied = with_open.mul(&taut::diagonal(
            state.model.clone(),
            with_open.arity(),
            jins,
            last,
        )?)?;
        out.push(new_parts, tied);
    }
    Ok(out)
}

/// Applies the annihilation operator `q_{-i}`: each part equal to `i` is
/// removed, its slot becoming the new open factor (appended last), with
/// crossing coefficient `-i`.
pub fn apply_lowering(i: u32, state: &FockState) -> Result<FockState, Error> {
    if i == 0 {
        return Err(Error::input("operator index must be nonzero"));
    }
    let kappa = -q(i as i64);
    let mut out = FockState::zero(state.model.clone(), state.open + 1);
    for (parts, gamma) in &state.comps {
        let l = parts.len();
        let arity = gamma.arity();
        for j in 0..l {
            if parts[j] != i {
                continue;
            }
            let mut new_parts = parts.clone();
            new_parts.remove(j);
            // Slot j moves to the freshly created open position at the end;
            // everything after it shifts down one.
            let mut perm: Vec<usize> = Vec::with_capacity(arity);
            for p in 0..arity {
                perm.push(match p.cmp(&j) {
                    std::cmp::Ordering::Less => p,
                    std::cmp::Ordering::Equal => arity - 1,
                    std::cmp::Ordering::Greater => p - 1,
                });
            }
            out.push(new_parts, gamma.permute(&perm).scale(&kappa));
        }
    }
    Ok(out)
}

/// `q_a` in operator form: positive indices create, negative annihilate.
pub fn q_op(a: i64, state: &FockState) -> Result<FockState, Error> {
    if a > 0 {
        apply_raising(a as u32, state)
    } else if a < 0 {
        apply_lowering((-a) as u32, state)
    } else {
        Err(Error::input("operator index must be nonzero"))
    }
}

/// The commutator right-hand side: two fresh open factors tied by a
/// diagonal.
pub fn contraction_insert(state: &FockState) -> Result<FockState, Error> {
    let mut out = FockState::zero(state.model.clone(), state.open + 2);
    for (parts, gamma) in &state.comps {
        let g1 = gamma.pullback_insert(gamma.arity())?;
        let g2 = g1.pullback_insert(g1.arity())?;
        let last = g2.arity() - 1;
        let tied = g2.mul(&taut::diagonal(
            state.model.clone(),
            g2.arity(),
            last - 1,
            last,
        )?)?;
        out.push(parts.clone(), tied);
    }
    Ok(out)
}

/// Checks `[q_a, q_b] = a·δ_{a+b,0}·contraction` on one state. The two
/// compositions are aligned by operator (not creation order) before
/// subtracting.
pub fn commutator_check(a: i64, b: i64, state: &FockState) -> Result<bool, Error> {
    let ab = q_op(a, &q_op(b, state)?)?;
    let ba = q_op(b, &q_op(a, state)?)?.swap_last_two_opens();
    let lhs = ab.sub(&ba)?;
    let rhs = if a + b == 0 {
        contraction_insert(state)?.scale(&q(a))
    } else {
        FockState::zero(state.model.clone(), state.open + 2)
    };
    Ok(lhs == rhs)
}

// ---------------------------------------------------------------------------
// Generator enumeration and the injectivity matrix
// ---------------------------------------------------------------------------

/// All partitions of `n`, parts descending.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = n.min(max);
        for p in (1..=top).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every normal-form term on `X^arity` built from diagonals, basis divisors
/// and points (no formal points): the finite generator set of the
/// tautological ring at this arity.
pub fn normal_form_generators(model: &Arc<SurfaceModel>, arity: usize) -> Vec<Part> {
    let single_decs: Vec<Dec> = {
        let mut v = vec![Dec::Fund];
        for j in 0..model.ns_rank() {
            v.push(Dec::Div(j as u16));
        }
        v.push(Dec::Pt);
        v
    };
    // Enumerate matchings (sets of disjoint pairs), then decorate singles.
    fn matchings(avail: &[u8]) -> Vec<(Vec<(u8, u8)>, Vec<u8>)> {
        if avail.is_empty() {
            return vec![(Vec::new(), Vec::new())];
        }
        let first = avail[0];
        let rest = &avail[1..];
        let mut out = Vec::new();
        for (pairs, mut singles) in matchings(rest) {
            singles.insert(0, first);
            out.push((pairs, singles));
        }
        for (idx, &other) in rest.iter().enumerate() {
            let mut remaining: Vec<u8> = rest.to_vec();
            remaining.remove(idx);
            for (mut pairs, singles) in matchings(&remaining) {
                pairs.insert(0, (first, other));
                out.push((pairs, singles));
            }
        }
        out
    }
    let all: Vec<u8> = (0..arity as u8).collect();
    let mut out = Vec::new();
    for (pairs, singles) in matchings(&all) {
        let mut stack: Vec<Vec<Dec>> = vec![Vec::new()];
        for _ in 0..singles.len() {
            let mut next = Vec::new();
            for prefix in &stack {
                for d in &single_decs {
                    let mut p = prefix.clone();
                    p.push(*d);
                    next.push(p);
                }
            }
            stack = next;
        }
        for decs in stack {
            let mut blocks: Vec<(smallvec::SmallVec<[u8; 12]>, Dec)> = pairs
                .iter()
                .map(|&(a, b)| (smallvec::SmallVec::from_slice(&[a, b]), Dec::Fund))
                .collect();
            for (s, d) in singles.iter().zip(decs.iter()) {
                blocks.push((smallvec::SmallVec::from_slice(&[*s]), *d));
            }
            out.push(Part::from_blocks(arity, &blocks));
        }
    }
    out
}

/// Orbit sums of the generators under the slot symmetries: a spanning set of
/// the symmetric coefficient classes for the given parts.
pub fn symmetric_coefficient_classes(
    model: &Arc<SurfaceModel>,
    parts: &[u32],
    open: usize,
) -> Vec<TautClass> {
    let arity = parts.len() + open;
    let perms = slot_symmetry(parts, arity);
    let gens = normal_form_generators(model, arity);
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out = Vec::new();
    for g in gens {
        let orbit: BTreeSet<Vec<u8>> = perms.iter().map(|p| encode(&g.permute(p))).collect();
        let canon = orbit.iter().next().unwrap().clone();
        if !seen.insert(canon) {
            continue;
        }
        let mut sum = TautClass::zero(model.clone(), arity);
        let mut done: BTreeSet<Vec<u8>> = BTreeSet::new();
        for p in &perms {
            let img = g.permute(p);
            if done.insert(encode(&img)) {
                sum = sum
                    .add(&TautClass::from_term(model.clone(), img, q(1)))
                    .expect("same shape");
            }
        }
        out.push(sum);
    }
    out
}

fn encode(p: &Part) -> Vec<u8> {
    let (ar, assign, decs) = p.sort_key();
    let mut v = vec![ar as u8];
    v.extend_from_slice(assign);
    for d in decs {
        match d {
            Dec::Fund => v.push(200),
            Dec::Div(j) => v.push(210 + *j as u8),
            Dec::Pt => v.push(201),
            Dec::FormalPt(_) => v.push(202),
        }
    }
    v
}

#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub n: u32,
    pub open: usize,
    pub columns: usize,
    pub rank: usize,
    pub full_rank: bool,
}

/// Builds the matrix of all annihilation strings on the tautological Fock
/// basis in weight `n` with `k` inert factors and reports whether it has
/// full column rank over the rationals.
pub fn injectivity_check(
    model: &Arc<SurfaceModel>,
    n: u32,
    k: usize,
) -> Result<InjectivityReport, Error> {
    let parts_list = partitions(n);
    let mut columns: Vec<(Vec<u32>, TautClass)> = Vec::new();
    for parts in &parts_list {
        for gamma in symmetric_coefficient_classes(model, parts, k) {
            columns.push((parts.clone(), gamma));
        }
    }
    // Rows: (string index, normal-form term of the vacuum coefficient).
    let mut row_index: BTreeMap<(usize, Vec<u8>), usize> = BTreeMap::new();
    let mut cols: Vec<BTreeMap<usize, Q>> = Vec::new();
    for (parts, gamma) in &columns {
        let state = FockState::basis(model.clone(), parts.clone(), gamma.clone(), k)?;
        let mut col: BTreeMap<usize, Q> = BTreeMap::new();
        for (mu_idx, mu) in parts_list.iter().enumerate() {
            let mut s = state.clone();
            for &m in mu.iter().rev() {
                s = apply_lowering(m, &s)?;
            }
            let Some(vac) = s.vacuum_part() else {
                continue;
            };
            for (part, coeff) in vac.terms() {
                let key = (mu_idx, encode(part));
                let next = row_index.len();
                let row = *row_index.entry(key).or_insert(next);
                let e = col.entry(row).or_insert_with(Q::zero);
                *e += coeff.clone();
            }
        }
        col.retain(|_, v| !v.is_zero());
        cols.push(col);
    }
    let rows = row_index.len();
    let mut matrix: Vec<Vec<Q>> = vec![vec![Q::zero(); columns.len()]; rows];
    for (c, col) in cols.iter().enumerate() {
        for (&r, v) in col {
            matrix[r][c] = v.clone();
        }
    }
    let rank = rank_q(matrix);
    Ok(InjectivityReport {
        n,
        open: k,
        columns: columns.len(),
        rank,
        full_rank: rank == columns.len(),
    })
}

fn rank_q(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for cc in c..cols {
                    let s = &f * &m[rank][cc];
                    m[r][cc] -= s;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Symbolic closure of the lowering operators
// ---------------------------------------------------------------------------

/// Symbols of operator words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpSymbol {
    /// `q_a`, `a != 0`.
    Q(i64),
    /// The commutator of `q_{-1}` with the boundary operator.
    QPrime,
}

pub type OperatorWord = Vec<OpSymbol>;

/// One derivation step: `q_{-target}` arises, up to the diagonal
/// pushforward, as `scale·[q'_{-1}, q_{-source}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureStep {
    pub target: u32,
    pub source: u32,
    pub scale: Q,
    pub word: OperatorWord,
}

impl fmt::Display for ClosureStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q_-{} = ({}) · diag_strip[ q'_-1, q_-{} ]",
            self.target, self.scale, self.source
        )
    }
}

/// Starting from the annihilation operator of index 1 and its boundary
/// commutator, derives every `q_{-i}`, `i <= n_max`, as an iterated
/// commutator. Purely symbolic bookkeeping; no action is computed.
pub fn generate_lowering_closure(n_max: u32) -> Vec<ClosureStep> {
    let mut out = Vec::new();
    for i in 1..n_max.max(1) {
        out.push(ClosureStep {
            target: i + 1,
            source: i,
            scale: q(1) / q(i as i64),
            word: vec![OpSymbol::QPrime, OpSymbol::Q(-(i as i64))],
        });
    }
    out
}
