//! Decorated set partitions: the normal-form terms of the tautological ring
//! of a K3 power.
//!
//! A term on `X^m` is a set partition of the factor positions `0..m` where
//! each block carries a decoration. A block `B` with decoration `d` stands
//! for the class obtained by pushing `d` forward along the small-diagonal
//! embedding `X -> X^B`, times the fundamental class elsewhere. The normal
//! form keeps blocks small:
//!
//! * `Fund` blocks have size <= 2 (a plain diagonal, or the fundamental
//!   class on a single factor);
//! * `Div` and point blocks are singletons.
//!
//! Oversize blocks produced by intersecting diagonals are rewritten by the
//! three fundamental identities of the surface (the triple product of
//! normalized diagonals, the divisor identity, the point identity) together
//! with the rational-curve decomposition of a divisor on a diagonal. Each
//! rewrite is an identity in the Chow ring, so reduction to the empty sum
//! certifies vanishing.
//!
//! The module has two layers: *raw* terms (arbitrary block sizes, exact
//! excess-intersection bookkeeping, no identity rewrites) and the interned
//! normal-form [`Part`]. Keeping the raw layer separate lets callers inspect
//! unreduced products, which the equivalence checks rely on.

use crate::rational::{q, Q};
use crate::surface::SurfaceModel;
use num::traits::Zero;
use once_cell::sync::Lazy;
use smallvec::SmallVec;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

type Members = SmallVec<[u8; 12]>;

/// Decoration carried by one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dec {
    /// Fundamental class (codim 0).
    Fund,
    /// A basis divisor (codim 1).
    Div(u16),
    /// The distinguished point class `c_X` (codim 2).
    Pt,
    /// An undetermined point class, identified by id (codim 2). Participates
    /// in every rule `Pt` does; the extra same-id rewrite lives in the
    /// filtration module.
    FormalPt(u32),
}

impl Dec {
    pub fn codim(self) -> usize {
        match self {
            Dec::Fund => 0,
            Dec::Div(_) => 1,
            Dec::Pt | Dec::FormalPt(_) => 2,
        }
    }

    /// Product of two decorations on the same surface factor.
    /// `None` means the product vanishes (degree reasons).
    fn mul(self, other: Dec, model: &SurfaceModel) -> Option<(Dec, Q)> {
        match (self, other) {
            (Dec::Fund, d) | (d, Dec::Fund) => Some((d, q(1))),
            (Dec::Div(i), Dec::Div(j)) => {
                let g = model.pairing(i as usize, j as usize).clone();
                if g.is_zero() {
                    None
                } else {
                    Some((Dec::Pt, g))
                }
            }
            _ => None,
        }
    }

    /// Multiplication by one excess factor `24 c_X`.
    fn mul_excess(self) -> Option<(Dec, Q)> {
        match self {
            Dec::Fund => Some((Dec::Pt, q(24))),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Interned normal-form partitions
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct PartData {
    arity: u8,
    /// position -> block id, blocks numbered by first occurrence.
    assign: Members,
    /// block id -> decoration.
    decs: SmallVec<[Dec; 12]>,
    hash: u64,
}

impl PartialEq for PartData {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.assign == other.assign && self.decs == other.decs
    }
}
impl Eq for PartData {}

/// An interned decorated partition in normal form. Cheap to clone, hash and
/// compare; equal partitions share one allocation.
#[derive(Clone)]
pub struct Part(Arc<PartData>);

impl PartialEq for Part {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Part {}

impl Hash for Part {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

static INTERNER: Lazy<Mutex<HashMap<u64, Vec<Arc<PartData>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn intern(data: PartData) -> Part {
    let mut map = INTERNER.lock().expect("partition interner poisoned");
    let bucket = map.entry(data.hash).or_default();
    for existing in bucket.iter() {
        if **existing == data {
            return Part(existing.clone());
        }
    }
    let arc = Arc::new(data);
    bucket.push(arc.clone());
    Part(arc)
}

fn canonical(arity: usize, blocks: &[(Members, Dec)]) -> PartData {
    debug_assert!(arity <= u8::MAX as usize);
    let mut assign: Members = SmallVec::from_elem(u8::MAX, arity);
    let mut pos_dec: SmallVec<[Dec; 12]> = SmallVec::from_elem(Dec::Fund, arity);
    for (members, dec) in blocks {
        for &p in members {
            pos_dec[p as usize] = *dec;
        }
        for &p in members {
            assign[p as usize] = members[0];
        }
    }
    // Renumber block representatives in order of first occurrence.
    let mut next = 0u8;
    let mut rename: SmallVec<[u8; 12]> = SmallVec::from_elem(u8::MAX, arity);
    let mut decs: SmallVec<[Dec; 12]> = SmallVec::new();
    let mut out: Members = SmallVec::with_capacity(arity);
    for p in 0..arity {
        let rep = assign[p];
        debug_assert!(rep != u8::MAX, "positions must be covered by blocks");
        if rename[rep as usize] == u8::MAX {
            rename[rep as usize] = next;
            decs.push(pos_dec[rep as usize]);
            next += 1;
        }
        out.push(rename[rep as usize]);
    }
    let mut h = DefaultHasher::new();
    arity.hash(&mut h);
    out.hash(&mut h);
    decs.hash(&mut h);
    PartData {
        arity: arity as u8,
        assign: out,
        decs,
        hash: h.finish(),
    }
}

impl Part {
    /// The all-singleton fundamental term `1` on `X^arity`.
    pub fn fundamental(arity: usize) -> Part {
        Part::from_blocks(arity, &[])
    }

    /// Builds a partition from explicit blocks; unmentioned positions become
    /// fundamental singletons. Callers must respect the normal-form caps.
    pub(crate) fn from_blocks(arity: usize, blocks: &[(Members, Dec)]) -> Part {
        let mut covered: SmallVec<[bool; 12]> = SmallVec::from_elem(false, arity);
        let mut all: Vec<(Members, Dec)> = Vec::with_capacity(blocks.len() + arity);
        for (members, dec) in blocks {
            debug_assert!(normal_form_ok(members.len(), *dec), "oversize block");
            for &m in members {
                debug_assert!(!covered[m as usize], "blocks overlap");
                covered[m as usize] = true;
            }
            let mut ms = members.clone();
            ms.sort_unstable();
            all.push((ms, *dec));
        }
        for p in 0..arity {
            if !covered[p] {
                all.push((SmallVec::from_slice(&[p as u8]), Dec::Fund));
            }
        }
        intern(canonical(arity, &all))
    }

    pub fn arity(&self) -> usize {
        self.0.arity as usize
    }

    pub fn codim(&self) -> usize {
        self.blocks()
            .map(|(members, dec)| 2 * (members.len() - 1) + dec.codim())
            .sum()
    }

    /// Iterates over `(members, decoration)` with members ascending.
    pub fn blocks(&self) -> impl Iterator<Item = (Members, Dec)> + '_ {
        let data = &self.0;
        (0..data.decs.len()).map(move |b| {
            let members: Members = (0..data.arity)
                .filter(|&p| data.assign[p as usize] == b as u8)
                .collect();
            (members, data.decs[b])
        })
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.0.assign[pos] as usize
    }

    pub fn dec_of_block(&self, block: usize) -> Dec {
        self.0.decs[block]
    }

    /// The decoration at `pos` together with the size of its block.
    pub fn at(&self, pos: usize) -> (Dec, usize) {
        let b = self.0.assign[pos];
        let size = self.0.assign.iter().filter(|&&x| x == b).count();
        (self.0.decs[b as usize], size)
    }

    pub fn to_raw(&self) -> RawTerm {
        RawTerm {
            arity: self.arity(),
            blocks: self.blocks().collect(),
        }
    }

    /// A key giving a deterministic total order on partitions.
    pub fn sort_key(&self) -> (usize, &[u8], &[Dec]) {
        (self.arity(), &self.0.assign, &self.0.decs)
    }

    /// Integrates out one factor. `None` when the term dies (a fundamental or
    /// divisor singleton has no degree); otherwise the multiplier is 1.
    pub fn forget(&self, pos: usize) -> Option<Part> {
        let raw = self.to_raw().forget(pos)?;
        // Deleting a member never violates the caps, so the raw result is
        // already normal.
        Some(Part::from_blocks(
            raw.arity,
            &raw.blocks.iter().cloned().collect::<Vec<_>>(),
        ))
    }

    /// Inserts a fresh fundamental singleton factor at position `pos`
    /// (existing positions >= pos shift up).
    pub fn insert(&self, pos: usize) -> Part {
        let arity = self.arity() + 1;
        let shift = |p: u8| if (p as usize) >= pos { p + 1 } else { p };
        let mut blocks: Vec<(Members, Dec)> = self
            .blocks()
            .map(|(members, dec)| (members.iter().map(|&p| shift(p)).collect(), dec))
            .collect();
        blocks.push((SmallVec::from_slice(&[pos as u8]), Dec::Fund));
        Part::from_blocks(arity, &blocks)
    }

    /// Applies a position permutation: position `p` moves to `perm[p]`.
    pub fn permute(&self, perm: &[usize]) -> Part {
        debug_assert_eq!(perm.len(), self.arity());
        let blocks: Vec<(Members, Dec)> = self
            .blocks()
            .map(|(members, dec)| {
                let mut ms: Members = members.iter().map(|&p| perm[p as usize] as u8).collect();
                ms.sort_unstable();
                (ms, dec)
            })
            .collect();
        Part::from_blocks(self.arity(), &blocks)
    }
}

fn normal_form_ok(size: usize, dec: Dec) -> bool {
    match dec {
        Dec::Fund => size <= 2,
        Dec::Div(_) => size <= 1,
        Dec::Pt | Dec::FormalPt(_) => size <= 1,
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_blocks(self.blocks(), f)
    }
}

fn display_blocks(
    blocks: impl Iterator<Item = (Members, Dec)>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let mut printed = false;
    let mut singles_fund = Vec::new();
    for (members, dec) in blocks {
        if members.len() == 1 && dec == Dec::Fund {
            singles_fund.push(members[0]);
            continue;
        }
        if printed {
            write!(f, "·")?;
        }
        printed = true;
        let positions: Vec<String> = members.iter().map(|p| p.to_string()).collect();
        match dec {
            Dec::Fund => write!(f, "Δ{{{}}}", positions.join(","))?,
            Dec::Div(i) => write!(f, "D{}({})", i, positions.join(","))?,
            Dec::Pt => write!(f, "c({})", positions.join(","))?,
            Dec::FormalPt(x) => write!(f, "[x{}]({})", x, positions.join(","))?,
        }
    }
    if !printed {
        write!(f, "1")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Raw (unreduced) terms
// ---------------------------------------------------------------------------

/// A decorated partition with no size caps: the result of merging diagonals
/// before any identity rewrite is applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawTerm {
    pub arity: usize,
    /// Blocks sorted by least member, members ascending, covering `0..arity`.
    pub blocks: Vec<(Members, Dec)>,
}

impl RawTerm {
    pub fn from_blocks(arity: usize, blocks: &[(Members, Dec)]) -> RawTerm {
        let mut covered: Vec<bool> = vec![false; arity];
        let mut all: Vec<(Members, Dec)> = Vec::with_capacity(blocks.len() + arity);
        for (members, dec) in blocks {
            for &m in members {
                assert!(!covered[m as usize], "blocks overlap");
                covered[m as usize] = true;
            }
            let mut ms = members.clone();
            ms.sort_unstable();
            all.push((ms, *dec));
        }
        for p in 0..arity {
            if !covered[p] {
                all.push((SmallVec::from_slice(&[p as u8]), Dec::Fund));
            }
        }
        all.sort();
        RawTerm {
            arity,
            blocks: all,
        }
    }

    pub fn codim(&self) -> usize {
        self.blocks
            .iter()
            .map(|(members, dec)| 2 * (members.len() - 1) + dec.codim())
            .sum()
    }

    /// Product of two raw terms on the same power. Blocks sharing factors
    /// merge; each independent cycle among the merged blocks contributes one
    /// excess factor `24 c_X`. Returns `None` when the product vanishes.
    pub fn mul(&self, other: &RawTerm, model: &SurfaceModel) -> Option<(RawTerm, Q)> {
        debug_assert_eq!(self.arity, other.arity);
        let na = self.blocks.len();
        let nb = other.blocks.len();
        // Union-find over the blocks of both terms.
        let mut parent: Vec<usize> = (0..na + nb).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut block_at_a = vec![0usize; self.arity];
        let mut block_at_b = vec![0usize; self.arity];
        for (i, (members, _)) in self.blocks.iter().enumerate() {
            for &p in members {
                block_at_a[p as usize] = i;
            }
        }
        for (i, (members, _)) in other.blocks.iter().enumerate() {
            for &p in members {
                block_at_b[p as usize] = i;
            }
        }
        for p in 0..self.arity {
            let ra = find(&mut parent, block_at_a[p]);
            let rb = find(&mut parent, na + block_at_b[p]);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        // Gather components.
        let mut comp_members: HashMap<usize, Members> = HashMap::new();
        let mut comp_nodes: HashMap<usize, usize> = HashMap::new();
        let mut comp_decs: HashMap<usize, Vec<Dec>> = HashMap::new();
        for p in 0..self.arity {
            let root = find(&mut parent, block_at_a[p]);
            comp_members.entry(root).or_default().push(p as u8);
        }
        for i in 0..na + nb {
            let root = find(&mut parent, i);
            if comp_members.contains_key(&root) {
                *comp_nodes.entry(root).or_insert(0) += 1;
                let dec = if i < na {
                    self.blocks[i].1
                } else {
                    other.blocks[i - na].1
                };
                comp_decs.entry(root).or_default().push(dec);
            }
        }
        let mut coeff = q(1);
        let mut blocks: Vec<(Members, Dec)> = Vec::with_capacity(comp_members.len());
        for (root, members) in comp_members {
            let nodes = comp_nodes[&root];
            let excess = members.len() + 1 - nodes; // cycle rank of the contact graph
            let mut dec = Dec::Fund;
            for d in &comp_decs[&root] {
                let (nd, c) = dec.mul(*d, model)?;
                dec = nd;
                coeff *= c;
            }
            for _ in 0..excess {
                let (nd, c) = dec.mul_excess()?;
                dec = nd;
                coeff *= c;
            }
            blocks.push((members, dec));
        }
        if coeff.is_zero() {
            return None;
        }
        blocks.sort();
        Some((
            RawTerm {
                arity: self.arity,
                blocks,
            },
            coeff,
        ))
    }

    /// Integrates out one factor: a point singleton has degree 1, a
    /// fundamental or divisor singleton has none; inside a larger block the
    /// factor is simply deleted.
    pub fn forget(&self, pos: usize) -> Option<RawTerm> {
        let mut blocks: Vec<(Members, Dec)> = Vec::with_capacity(self.blocks.len());
        for (members, dec) in &self.blocks {
            if members.contains(&(pos as u8)) {
                if members.len() == 1 {
                    match dec {
                        Dec::Pt | Dec::FormalPt(_) => continue, // degree 1
                        Dec::Fund | Dec::Div(_) => return None, // degree 0
                    }
                }
                let ms: Members = members
                    .iter()
                    .filter(|&&p| p != pos as u8)
                    .map(|&p| if (p as usize) > pos { p - 1 } else { p })
                    .collect();
                blocks.push((ms, *dec));
            } else {
                let ms: Members = members
                    .iter()
                    .map(|&p| if (p as usize) > pos { p - 1 } else { p })
                    .collect();
                blocks.push((ms, *dec));
            }
        }
        blocks.sort();
        Some(RawTerm {
            arity: self.arity - 1,
            blocks,
        })
    }

    /// Rewrites every oversize block by the fundamental identities, returning
    /// normal-form terms with coefficients. Expansions are block-local:
    ///
    /// * a point on a diagonal splits into points on every factor;
    /// * a divisor on a diagonal splits as a sum placing the divisor on one
    ///   factor and points on the rest (rational-curve decomposition);
    /// * a small diagonal of size >= 3 expands into pairwise diagonals and
    ///   points.
    pub fn normalize(&self, model: &SurfaceModel) -> Vec<(Part, Q)> {
        let _ = model;
        // alternatives per block: list of (mini-blocks, coefficient)
        type Alt = (Vec<(Members, Dec)>, Q);
        let mut per_block: Vec<Vec<Alt>> = Vec::with_capacity(self.blocks.len());
        for (members, dec) in &self.blocks {
            let b = members.len();
            let alts: Vec<Alt> = if normal_form_ok(b, *dec) {
                vec![(vec![(members.clone(), *dec)], q(1))]
            } else {
                match dec {
                    Dec::Pt | Dec::FormalPt(_) => {
                        let singles = members
                            .iter()
                            .map(|&p| (SmallVec::from_slice(&[p]), *dec))
                            .collect();
                        vec![(singles, q(1))]
                    }
                    Dec::Div(_) => members
                        .iter()
                        .map(|&carrier| {
                            let mini = members
                                .iter()
                                .map(|&p| {
                                    let d = if p == carrier { *dec } else { Dec::Pt };
                                    (SmallVec::from_slice(&[p]), d)
                                })
                                .collect();
                            (mini, q(1))
                        })
                        .collect(),
                    Dec::Fund => {
                        let mut alts: Vec<Alt> = Vec::new();
                        for i in 0..b {
                            for j in i + 1..b {
                                let mut mini = vec![(
                                    SmallVec::from_slice(&[members[i], members[j]]),
                                    Dec::Fund,
                                )];
                                for (t, &p) in members.iter().enumerate() {
                                    if t != i && t != j {
                                        mini.push((SmallVec::from_slice(&[p]), Dec::Pt));
                                    }
                                }
                                alts.push((mini, q(1)));
                            }
                        }
                        let drop = -q((b as i64) - 2);
                        for i in 0..b {
                            let mini = members
                                .iter()
                                .enumerate()
                                .map(|(t, &p)| {
                                    let d = if t == i { Dec::Fund } else { Dec::Pt };
                                    (SmallVec::from_slice(&[p]), d)
                                })
                                .collect();
                            alts.push((mini, drop.clone()));
                        }
                        alts
                    }
                }
            };
            per_block.push(alts);
        }
        // Cartesian product of the per-block alternatives.
        let mut out: Vec<(Part, Q)> = Vec::new();
        let mut stack: Vec<(Vec<(Members, Dec)>, Q)> = vec![(Vec::new(), q(1))];
        for alts in per_block {
            let mut next = Vec::with_capacity(stack.len() * alts.len());
            for (acc, c) in &stack {
                for (mini, ac) in &alts {
                    let mut blocks = acc.clone();
                    blocks.extend(mini.iter().cloned());
                    next.push((blocks, c * ac));
                }
            }
            stack = next;
        }
        let max_codim = 2 * self.arity;
        for (blocks, c) in stack {
            let part = Part::from_blocks(self.arity, &blocks);
            if part.codim() > max_codim {
                continue;
            }
            out.push((part, c));
        }
        out
    }
}

impl fmt::Display for RawTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_blocks(self.blocks.iter().cloned(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn model() -> std::sync::Arc<SurfaceModel> {
        SurfaceModel::default_model()
    }

    fn diag(arity: usize, r: u8, s: u8) -> RawTerm {
        RawTerm::from_blocks(arity, &[(smallvec![r, s], Dec::Fund)])
    }

    #[test]
    fn interning_shares_allocations() {
        let a = Part::from_blocks(3, &[(smallvec![0, 1], Dec::Fund)]);
        let b = Part::from_blocks(3, &[(smallvec![1, 0], Dec::Fund)]);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_eq!(a, b);
    }

    #[test]
    fn codim_bookkeeping() {
        let p = Part::from_blocks(
            3,
            &[(smallvec![0, 1], Dec::Fund), (smallvec![2], Dec::Pt)],
        );
        assert_eq!(p.codim(), 2 + 2);
        assert_eq!(Part::fundamental(4).codim(), 0);
    }

    #[test]
    fn diagonal_self_intersection_gives_excess() {
        // Δ·Δ on X^2 = 24 c x c.
        let d = diag(2, 0, 1);
        let (raw, coeff) = d.mul(&d, &model()).unwrap();
        assert_eq!(coeff, q(24));
        let nf = raw.normalize(&model());
        assert_eq!(nf.len(), 1);
        let (p, c) = &nf[0];
        assert_eq!(*c, q(1));
        assert_eq!(p.at(0), (Dec::Pt, 1));
        assert_eq!(p.at(1), (Dec::Pt, 1));
    }

    #[test]
    fn triple_excess_vanishes() {
        // Δ·Δ·Δ on X^2 has excess c_X^2 = 0.
        let d = diag(2, 0, 1);
        let (raw, _) = d.mul(&d, &model()).unwrap();
        assert!(raw.mul(&d, &model()).is_none());
    }

    #[test]
    fn four_cycle_of_diagonals_has_one_excess() {
        // Δ01·Δ23 times Δ12·Δ03: the contact graph is a 4-cycle.
        let a = RawTerm::from_blocks(
            4,
            &[
                (smallvec![0, 1], Dec::Fund),
                (smallvec![2, 3], Dec::Fund),
            ],
        );
        let b = RawTerm::from_blocks(
            4,
            &[
                (smallvec![1, 2], Dec::Fund),
                (smallvec![0, 3], Dec::Fund),
            ],
        );
        let (raw, coeff) = a.mul(&b, &model()).unwrap();
        assert_eq!(coeff, q(24));
        assert_eq!(raw.blocks.len(), 1);
        assert_eq!(raw.blocks[0].1, Dec::Pt);
    }

    #[test]
    fn small_diagonal_expansion_matches_iterated_products() {
        // The closed-form expansion of a size-b small diagonal must agree
        // with building it as Δ(b-1) · Δ_{b-2,b-1}.
        let m = model();
        for b in 3..=6usize {
            let big = RawTerm::from_blocks(b, &[((0..b as u8).collect(), Dec::Fund)]);
            let direct = collect(big.normalize(&m));

            let smaller = RawTerm::from_blocks(b, &[((0..(b as u8 - 1)).collect(), Dec::Fund)]);
            let last = diag(b, b as u8 - 2, b as u8 - 1);
            let mut iterated: HashMap<Part, Q> = HashMap::new();
            for (p, c) in smaller.normalize(&m) {
                let raw = p.to_raw();
                if let Some((prod, pc)) = raw.mul(&last, &m) {
                    for (np, nc) in prod.normalize(&m) {
                        *iterated.entry(np).or_insert_with(Q::zero) += &c * &pc * nc;
                    }
                }
            }
            iterated.retain(|_, v| !v.is_zero());
            assert_eq!(direct, iterated, "small diagonal size {b}");
        }
    }

    fn collect(terms: Vec<(Part, Q)>) -> HashMap<Part, Q> {
        let mut map: HashMap<Part, Q> = HashMap::new();
        for (p, c) in terms {
            *map.entry(p).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, v| !v.is_zero());
        map
    }

    #[test]
    fn divisor_on_diagonal_splits() {
        // D on a 2-block: D x c + c x D.
        let m = model();
        let raw = RawTerm::from_blocks(2, &[(smallvec![0, 1], Dec::Div(0))]);
        let nf = collect(raw.normalize(&m));
        assert_eq!(nf.len(), 2);
        for (p, c) in nf {
            assert_eq!(c, q(1));
            assert_eq!(p.codim(), 3);
        }
    }

    #[test]
    fn forget_rules() {
        // Forgetting a factor of a diagonal leaves the fundamental class.
        let d = Part::from_blocks(2, &[(smallvec![0, 1], Dec::Fund)]);
        let f = d.forget(1).unwrap();
        assert_eq!(f, Part::fundamental(1));
        // A point singleton integrates to 1.
        let p = Part::from_blocks(2, &[(smallvec![0], Dec::Pt), (smallvec![1], Dec::Pt)]);
        assert_eq!(
            p.forget(0).unwrap(),
            Part::from_blocks(1, &[(smallvec![0], Dec::Pt)])
        );
        // A divisor singleton has no degree.
        let dv = Part::from_blocks(1, &[(smallvec![0], Dec::Div(0))]);
        assert!(dv.forget(0).is_none());
    }

    #[test]
    fn permute_and_insert() {
        let d = Part::from_blocks(3, &[(smallvec![0, 1], Dec::Fund)]);
        let moved = d.permute(&[2, 1, 0]);
        assert_eq!(
            moved,
            Part::from_blocks(3, &[(smallvec![1, 2], Dec::Fund)])
        );
        let ins = d.insert(0);
        assert_eq!(
            ins,
            Part::from_blocks(4, &[(smallvec![1, 2], Dec::Fund)])
        );
    }
}
