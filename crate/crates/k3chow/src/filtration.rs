//! Boxtimes-power calculators for zero-cycles on the surface: the external
//! power of a degree-zero cycle along all projections of a self-product,
//! whose vanishing order reads off the filtration index.
//!
//! Formal points obey one extra rewrite beyond the surface calculus: for the
//! same point id on two factors,
//! `[x]⊗[x] -> c⊗[x] + [x]⊗c - c⊗c`,
//! i.e. `([x]-c_X)` has vanishing square under the external product. The
//! rewrite is not postulated: [`derive_point_square_rule`] produces it by
//! pushing the triple product of normalized diagonals against a formal point
//! and matching the result, so a nonempty reduced form is reported as "not
//! reduced", never as a certified nonvanishing.

use crate::partition::{Dec, Part};
use crate::rational::{q, Q};
use crate::surface::SurfaceModel;
use crate::taut::{self, TautClass};
use crate::Error;
use num::traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

/// A point symbol of a zero-cycle expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointSym {
    /// The distinguished class `c_X`.
    Cx,
    /// A formal point with an id.
    Formal(u32),
}

/// An exact rational zero-cycle on the surface, as a combination of formal
/// points and `c_X`. Ids declared to lie on a rational curve are replaced by
/// `c_X` up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCycleExpr {
    terms: BTreeMap<PointSym, Q>,
}

impl ZeroCycleExpr {
    pub fn new(
        terms: Vec<(PointSym, Q)>,
        on_rational_curve: &BTreeSet<u32>,
    ) -> ZeroCycleExpr {
        let mut map: BTreeMap<PointSym, Q> = BTreeMap::new();
        for (sym, c) in terms {
            let sym = match sym {
                PointSym::Formal(id) if on_rational_curve.contains(&id) => PointSym::Cx,
                other => other,
            };
            *map.entry(sym).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        ZeroCycleExpr { terms: map }
    }

    /// `[x_id] - c_X`.
    pub fn normalized_point(id: u32) -> ZeroCycleExpr {
        ZeroCycleExpr::new(
            vec![(PointSym::Formal(id), q(1)), (PointSym::Cx, -q(1))],
            &BTreeSet::new(),
        )
    }

    /// `[x_1] + ... + [x_i] - i·c_X` with distinct ids `1..=i`.
    pub fn normalized_sum(i: u32) -> ZeroCycleExpr {
        let mut terms: Vec<(PointSym, Q)> =
            (1..=i).map(|j| (PointSym::Formal(j), q(1))).collect();
        terms.push((PointSym::Cx, -q(i as i64)));
        ZeroCycleExpr::new(terms, &BTreeSet::new())
    }

    pub fn degree(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PointSym, &Q)> {
        self.terms.iter()
    }
}

fn sym_class(model: &Arc<SurfaceModel>, arity: usize, pos: usize, sym: PointSym) -> TautClass {
    match sym {
        PointSym::Cx => taut::point(model.clone(), arity, pos),
        PointSym::Formal(id) => taut::formal_point(model.clone(), arity, pos, id),
    }
}

/// Rewrites every same-id pair of formal points on two factors until none
/// remains. Terminates because each step lowers the number of same-id pairs.
pub fn apply_point_square_rule(class: &TautClass) -> TautClass {
    let model = class.model().clone();
    let arity = class.arity();
    let mut work: Vec<(Part, Q)> = class
        .terms()
        .map(|(p, c)| (p.clone(), c.clone()))
        .collect();
    let mut done: HashMap<Part, Q> = HashMap::new();
    while let Some((part, coeff)) = work.pop() {
        let mut pair: Option<(usize, usize, u32)> = None;
        'outer: for r in 0..arity {
            if let (Dec::FormalPt(id), 1) = part.at(r) {
                for s in r + 1..arity {
                    if part.at(s) == (Dec::FormalPt(id), 1) {
                        pair = Some((r, s, id));
                        break 'outer;
                    }
                }
            }
        }
        let Some((r, s, id)) = pair else {
            let e = done.entry(part).or_insert_with(Q::zero);
            *e += coeff;
            continue;
        };
        // [x](r)[x](s) -> c(r)[x](s) + [x](r)c(s) - c(r)c(s)
        let rest: Vec<(smallvec::SmallVec<[u8; 12]>, Dec)> = part
            .blocks()
            .filter(|(members, _)| {
                !(members.len() == 1 && (members[0] as usize == r || members[0] as usize == s))
            })
            .collect();
        let build = |dr: Dec, ds: Dec| {
            let mut blocks = rest.clone();
            blocks.push((smallvec::SmallVec::from_slice(&[r as u8]), dr));
            blocks.push((smallvec::SmallVec::from_slice(&[s as u8]), ds));
            Part::from_blocks(arity, &blocks)
        };
        work.push((build(Dec::Pt, Dec::FormalPt(id)), coeff.clone()));
        work.push((build(Dec::FormalPt(id), Dec::Pt), coeff.clone()));
        work.push((build(Dec::Pt, Dec::Pt), -coeff));
    }
    done.retain(|_, c| !c.is_zero());
    let mut out = TautClass::zero(model, arity);
    for (p, c) in done {
        out = out
            .add(&TautClass::from_term(out.model().clone(), p, c))
            .expect("same shape");
    }
    out
}

/// The external power `xi ⊠ ... ⊠ xi` on `X^m`, reduced in the surface
/// calculus extended by the point-square rewrite.
pub fn boxtimes_power(
    model: &Arc<SurfaceModel>,
    xi: &ZeroCycleExpr,
    m: usize,
) -> Result<TautClass, Error> {
    if m == 0 {
        return Err(Error::input("boxtimes power needs at least one factor"));
    }
    let mut acc = TautClass::one(model.clone(), m);
    for pos in 0..m {
        let mut factor = TautClass::zero(model.clone(), m);
        for (&sym, c) in xi.terms() {
            factor = factor.add(&sym_class(model, m, pos, sym).scale(c))?;
        }
        acc = acc.mul(&factor)?;
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(apply_point_square_rule(&acc))
}

/// Certificate for the point-square rewrite. `product_pushforward` is the
/// two-factor pushforward of `Δ̄01·Δ̄02·Δ̄03·[x]^(1)` (formal point folded in
/// first, so the reduction keeps it entangled); `square_expansion` is the
/// plain expansion of `([x]-c)⊠([x]-c)` without the rewrite. Their exact
/// equality, together with the vanishing of the triple diagonal product,
/// certifies that the square expansion is zero in the Chow ring.
#[derive(Debug, Clone)]
pub struct PointSquareCertificate {
    pub product_pushforward: TautClass,
    pub square_expansion: TautClass,
    pub triple_product_vanishes: bool,
}

impl PointSquareCertificate {
    pub fn is_certified(&self) -> bool {
        self.triple_product_vanishes && self.product_pushforward == self.square_expansion
    }
}

/// Derives the point-square rewrite from the triple product of normalized
/// diagonals: pushing `Δ̄01·Δ̄02·Δ̄03·p_1*[x]` to the last two factors equals
/// the square expansion of `[x]-c_X`, and the triple product itself reduces
/// to zero, so the expansion is a Chow zero.
pub fn derive_point_square_rule(model: &Arc<SurfaceModel>) -> PointSquareCertificate {
    derive_square_rule_for(model, PointSym::Formal(0))
}

/// The certificate computation for a given point symbol on factor 1.
pub fn derive_square_rule_for(model: &Arc<SurfaceModel>, point: PointSym) -> PointSquareCertificate {
    let pushed = triple_product_pushforward(model, sym_class(model, 4, 1, point));
    let square = {
        // (p - c) ⊠ (p - c) on X^2, expanded without the square rewrite.
        let f0 = sym_class(model, 2, 0, point)
            .sub(&taut::point(model.clone(), 2, 0))
            .unwrap();
        let f1 = sym_class(model, 2, 1, point)
            .sub(&taut::point(model.clone(), 2, 1))
            .unwrap();
        f0.mul(&f1).unwrap()
    };
    PointSquareCertificate {
        product_pushforward: pushed,
        square_expansion: square,
        triple_product_vanishes: taut::bv_product(model.clone()).is_zero(),
    }
}

/// `Δ̄01·Δ̄02·Δ̄03` times a class on factor 1, pushed to the last two
/// factors. The factor-1 class is folded in first: multiplying the three
/// normalized diagonals together first would reduce to the empty form
/// before the class can see them, and the pushforward would be trivially
/// zero rather than the informative reduced shape.
pub fn triple_product_pushforward(model: &Arc<SurfaceModel>, on_factor_one: TautClass) -> TautClass {
    let mut prod = on_factor_one;
    for t in 1..=3usize {
        let dbar = taut::normalized_diagonal(model.clone(), 4, 0, t).unwrap();
        prod = prod.mul(&dbar).unwrap();
    }
    prod.pushforward_forget(0)
        .unwrap()
        .pushforward_forget(0)
        .unwrap()
}

/// Result of a filtration index scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationIndex {
    /// The least `i` with vanishing `(i+1)`-st boxtimes power.
    Index(usize),
    /// No power up to the bound reduced to zero; nonvanishing is not
    /// certified.
    Unknown { max_checked: usize },
}

/// The least `i <= max_m` such that the `(i+1)`-st boxtimes power of `xi`
/// reduces to zero. Monotonicity is asserted on the first vanishing power.
pub fn filtration_index(
    model: &Arc<SurfaceModel>,
    xi: &ZeroCycleExpr,
    max_m: usize,
) -> Result<FiltrationIndex, Error> {
    if !xi.degree().is_zero() {
        return Err(Error::input(format!(
            "filtration index needs a degree-zero cycle, degree is {}",
            xi.degree()
        )));
    }
    if xi.is_zero() {
        return Ok(FiltrationIndex::Index(0));
    }
    for i in 0..=max_m {
        if boxtimes_power(model, xi, i + 1)?.is_zero() {
            // Once a power vanishes, all higher powers must too.
            assert!(
                boxtimes_power(model, xi, i + 2)?.is_zero(),
                "boxtimes vanishing must be monotone"
            );
            return Ok(FiltrationIndex::Index(i));
        }
    }
    Ok(FiltrationIndex::Unknown { max_checked: max_m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> Arc<SurfaceModel> {
        SurfaceModel::default_model()
    }

    #[test]
    fn normalized_point_square_vanishes() {
        let m = model();
        let xi = ZeroCycleExpr::normalized_point(7);
        let sq = boxtimes_power(&m, &xi, 2).unwrap();
        assert!(sq.is_zero());
        // The first power does not reduce.
        assert!(!boxtimes_power(&m, &xi, 1).unwrap().is_zero());
    }

    #[test]
    fn trivial_cycle_vanishes_at_the_first_power() {
        let m = model();
        let xi = ZeroCycleExpr::new(
            vec![(PointSym::Cx, q(1)), (PointSym::Cx, -q(1))],
            &BTreeSet::new(),
        );
        assert!(xi.is_zero());
        assert!(boxtimes_power(&m, &xi, 1).unwrap().is_zero());
    }

    #[test]
    fn rational_curve_points_collapse_to_cx() {
        let m = model();
        let rc: BTreeSet<u32> = [3].into_iter().collect();
        let xi = ZeroCycleExpr::new(
            vec![(PointSym::Formal(3), q(1)), (PointSym::Cx, -q(1))],
            &rc,
        );
        assert!(xi.is_zero());
        assert!(boxtimes_power(&m, &xi, 1).unwrap().is_zero());
    }

    #[test]
    fn three_point_sum_vanishes_at_the_fourth_power() {
        let m = model();
        let xi = ZeroCycleExpr::normalized_sum(3);
        assert!(!boxtimes_power(&m, &xi, 3).unwrap().is_zero());
        assert!(boxtimes_power(&m, &xi, 4).unwrap().is_zero());
        assert_eq!(
            filtration_index(&m, &xi, 5).unwrap(),
            FiltrationIndex::Index(3)
        );
    }

    #[test]
    fn index_examples() {
        let m = model();
        assert_eq!(
            filtration_index(&m, &ZeroCycleExpr::normalized_point(1), 4).unwrap(),
            FiltrationIndex::Index(1)
        );
        let zero = ZeroCycleExpr::new(vec![], &BTreeSet::new());
        assert_eq!(
            filtration_index(&m, &zero, 4).unwrap(),
            FiltrationIndex::Index(0)
        );
        // Effective index bound: sums of i normalized points vanish by the
        // (i+1)-st power.
        for i in 1..=4u32 {
            match filtration_index(&m, &ZeroCycleExpr::normalized_sum(i), 5).unwrap() {
                FiltrationIndex::Index(idx) => assert!(idx <= i as usize),
                FiltrationIndex::Unknown { .. } => panic!("index must be found"),
            }
        }
    }

    #[test]
    fn degree_check() {
        let m = model();
        let xi = ZeroCycleExpr::new(vec![(PointSym::Cx, q(1))], &BTreeSet::new());
        assert!(filtration_index(&m, &xi, 3).is_err());
    }

    #[test]
    fn unknown_never_certifies_nonvanishing() {
        let m = model();
        let xi = ZeroCycleExpr::normalized_sum(2);
        match filtration_index(&m, &xi, 1).unwrap() {
            FiltrationIndex::Unknown { max_checked } => assert_eq!(max_checked, 1),
            FiltrationIndex::Index(_) => panic!("index 2 is out of the scanned range"),
        }
    }

    #[test]
    fn square_rule_certificate() {
        let m = model();
        let cert = derive_point_square_rule(&m);
        assert!(cert.is_certified());
        assert_eq!(cert.product_pushforward.num_terms(), 4);
        // Degenerate variant: with c_X in place of the formal point both
        // sides collapse to zero.
        let cert_c = derive_square_rule_for(&m, PointSym::Cx);
        assert!(cert_c.is_certified());
        assert!(cert_c.product_pushforward.is_zero());
        // Divisor variant: the pushforward vanishes outright.
        let pushed_d =
            triple_product_pushforward(&m, taut::divisor_basis(m.clone(), 4, 1, 0).unwrap());
        assert!(pushed_d.is_zero());
    }

    #[test]
    fn boxtimes_output_is_symmetric() {
        let m = model();
        let xi = ZeroCycleExpr::normalized_sum(2);
        let p = boxtimes_power(&m, &xi, 3).unwrap();
        assert_eq!(p.permute(&[1, 2, 0]), p);
        assert_eq!(p.permute(&[1, 0, 2]), p);
    }
}
