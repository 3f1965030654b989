//! Brute-force references: exact RLGP on tiny grids, the largest subset of a
//! map list lying in one abelian coset, and a full scan of `Aff(1, 𝔽_p)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{AffineMap, CosetDescriptor, LineRecord};
use crate::caps::{check_cap, Caps};
use crate::error::{Error, Result};
use crate::grid::{is_alpha_rich, richness_unchecked, GroundSet};
use crate::scalar::{Rational, Scalar};
use crate::symset::{check_alpha, Member, SymmetrySet};

#[derive(Clone, Debug)]
pub struct RlgpResult {
    pub value: usize,
    pub witness: Vec<AffineMap>,
    pub candidate_count: usize,
    /// Search nodes expanded.
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RlgpReport {
    pub value: usize,
    pub witness: Vec<LineRecord>,
    pub candidate_count: usize,
    pub nodes: u64,
}

impl RlgpResult {
    pub fn report(&self) -> RlgpReport {
        RlgpReport {
            value: self.value,
            witness: self.witness.iter().map(AffineMap::to_record).collect(),
            candidate_count: self.candidate_count,
            nodes: self.nodes,
        }
    }
}

/// Lines with nonzero slope through at least two points of `Y×Y`.
fn lines_through_two_points(y: &GroundSet) -> Vec<AffineMap> {
    let e = y.elements();
    let mut out = BTreeSet::new();
    for (i, x1) in e.iter().enumerate() {
        for x2 in &e[i + 1..] {
            let dx = x2 - x1;
            for y1 in e {
                for y2 in e {
                    if y1 == y2 {
                        continue;
                    }
                    let a = &(y2 - y1) / &dx;
                    let b = y1 - &(&a * x1);
                    out.insert(AffineMap::new(a, b).expect("distinct ordinates give a nonzero slope"));
                }
            }
        }
    }
    out.into_iter().collect()
}

struct Search {
    slopes: Vec<usize>,
    /// Intersection-point ids on each candidate line.
    points_on: Vec<Vec<usize>>,
    through: Vec<u8>,
    slope_used: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search {
    fn compatible(&self, c: usize) -> bool {
        !self.slope_used[self.slopes[c]] && self.points_on[c].iter().all(|&p| self.through[p] < 2)
    }

    fn run(&mut self, from: usize) {
        if self.nodes == self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let open: Vec<usize> = (from..self.slopes.len()).filter(|&c| self.compatible(c)).collect();
        let distinct: BTreeSet<usize> = open.iter().map(|&c| self.slopes[c]).collect();
        if self.chosen.len() + distinct.len() <= self.best.len() {
            return;
        }
        for (idx, &c) in open.iter().enumerate() {
            let rest: BTreeSet<usize> = open[idx..].iter().map(|&d| self.slopes[d]).collect();
            if self.chosen.len() + rest.len() <= self.best.len() {
                return;
            }
            if !self.compatible(c) {
                continue;
            }
            self.slope_used[self.slopes[c]] = true;
            for &p in &self.points_on[c] {
                self.through[p] += 1;
            }
            self.chosen.push(c);
            self.run(c + 1);
            self.chosen.pop();
            for &p in &self.points_on[c] {
                self.through[p] -= 1;
            }
            self.slope_used[self.slopes[c]] = false;
        }
    }
}

/// Maximum number of `α`-rich lines in `Y×Y` in general position.
pub fn rlgp_exact(y: &GroundSet, alpha: &Rational, caps: &Caps) -> Result<RlgpResult> {
    check_alpha(y, alpha)?;
    check_cap("RLGP ground size", y.len() as u128, caps.rlgp as u128)?;
    let mut candidates: Vec<(usize, AffineMap)> = lines_through_two_points(y)
        .into_par_iter()
        .filter(|g| is_alpha_rich(g, y, alpha).unwrap_or(false))
        .map(|g| (richness_unchecked(&g, y), g))
        .collect();
    candidates.sort_by(|(r1, g1), (r2, g2)| r2.cmp(r1).then_with(|| g1.cmp(g2)));
    let lines: Vec<AffineMap> = candidates.into_iter().map(|(_, g)| g).collect();

    let mut slope_ids: BTreeMap<&Scalar, usize> = BTreeMap::new();
    for g in &lines {
        let next = slope_ids.len();
        slope_ids.entry(g.slope()).or_insert(next);
    }
    let slopes: Vec<usize> = lines.iter().map(|g| slope_ids[g.slope()]).collect();
    let mut point_ids: HashMap<(Scalar, Scalar), usize> = HashMap::new();
    let mut points_on = vec![Vec::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(pt) = lines[i].intersection(&lines[j]) {
                let next = point_ids.len();
                let id = *point_ids.entry(pt).or_insert(next);
                points_on[i].push(id);
                points_on[j].push(id);
            }
        }
    }
    for p in &mut points_on {
        p.sort_unstable();
        p.dedup();
    }
    let mut search = Search {
        slope_used: vec![false; slope_ids.len()],
        slopes,
        points_on,
        through: vec![0; point_ids.len()],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget: caps.rlgp_nodes,
        exhausted: false,
    };
    search.run(0);
    if search.exhausted {
        return Err(Error::CapExceeded {
            what: "RLGP search nodes",
            size: search.nodes as u128,
            cap: caps.rlgp_nodes as u128,
        });
    }
    let witness: Vec<AffineMap> = search.best.iter().map(|&c| lines[c].clone()).collect();
    Ok(RlgpResult {
        value: witness.len(),
        witness,
        candidate_count: lines.len(),
        nodes: search.nodes,
    })
}

/// The largest subset of `A` inside one coset of `U` or one transporter.
#[derive(Clone, Debug)]
pub struct AbelianCoset {
    pub coset: CosetDescriptor,
    pub subset: Vec<AffineMap>,
}

pub fn best_abelian_coset(maps: &[AffineMap]) -> Result<AbelianCoset> {
    let mut seen = BTreeSet::new();
    let distinct: Vec<&AffineMap> = maps.iter().filter(|g| seen.insert(*g)).collect();
    if distinct.is_empty() {
        return Err(Error::invalid("best_abelian_coset needs a nonempty list"));
    }
    let mut by_slope: BTreeMap<&Scalar, Vec<usize>> = BTreeMap::new();
    for (i, g) in distinct.iter().enumerate() {
        by_slope.entry(g.slope()).or_default().push(i);
    }
    let mut by_point: BTreeMap<(Scalar, Scalar), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            if let Some(pt) = distinct[i].intersection(distinct[j]) {
                let set = by_point.entry(pt).or_default();
                set.insert(i);
                set.insert(j);
            }
        }
    }
    let (slope, members) = by_slope
        .iter()
        .max_by(|(s1, m1), (s2, m2)| m1.len().cmp(&m2.len()).then_with(|| s2.cmp(s1)))
        .expect("nonempty");
    let mut coset = CosetDescriptor::TranslationCoset {
        slope: (*slope).clone(),
    };
    let mut chosen: BTreeSet<usize> = members.iter().copied().collect();
    for (pt, members) in &by_point {
        if members.len() > chosen.len() {
            coset = CosetDescriptor::ConcurrencyCoset { point: pt.clone() };
            chosen = members.clone();
        }
    }
    let subset = maps.iter().filter(|g| coset.contains(g)).cloned().collect();
    Ok(AbelianCoset { coset, subset })
}

/// `sym_α(Y)` by scanning all `p(p-1)` maps of `Aff(1, 𝔽_p)`.
pub fn sym_fp_oracle(y: &GroundSet, alpha: &Rational, caps: &Caps) -> Result<SymmetrySet> {
    let p = y
        .field()
        .modulus()
        .ok_or_else(|| Error::invalid("the full-scan oracle needs a ground set over F_p"))?;
    check_cap("oracle prime", p as u128, caps.sym_fp_prime as u128)?;
    let field = y.field();
    let n = y.len();
    let mut member = vec![false; p as usize];
    for e in y.elements() {
        let v = e.to_bigint().expect("residue");
        member[usize::try_from(v).expect("residue below p")] = true;
    }
    let points: Vec<u64> = (0..p).filter(|&v| member[v as usize]).collect();
    let target = alpha * Rational::from_integer(BigInt::from(n));
    let members: Vec<Member> = (1..p)
        .into_par_iter()
        .flat_map_iter(|a| {
            let member = &member;
            let points = &points;
            let target = &target;
            (0..p).filter_map(move |b| {
                let r = points
                    .iter()
                    .filter(|&&x| member[((a as u128 * x as u128 + b as u128) % p as u128) as usize])
                    .count();
                (Rational::from_integer(BigInt::from(r)) >= *target).then(|| Member {
                    map: AffineMap::from_ints(a as i64, b as i64, field).expect("a ≠ 0"),
                    richness: r,
                })
            })
        })
        .collect();
    Ok(SymmetrySet::from_members(alpha.clone(), n, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::in_general_position;
    use crate::scalar::{rational, Field};
    use crate::symset::sym_set;

    fn q(a: i64, b: i64) -> AffineMap {
        AffineMap::from_ints(a, b, Field::Rational).unwrap()
    }

    #[test]
    fn rlgp_two_points() {
        let y = GroundSet::from_ints(Field::Rational, [0, 1]).unwrap();
        let r = rlgp_exact(&y, &rational(1, 1), &Caps::default()).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.candidate_count, 2);
        let mut w = r.witness.clone();
        w.sort();
        assert_eq!(w, vec![q(-1, 1), q(1, 0)]);
    }

    #[test]
    fn rlgp_three_points() {
        let y = GroundSet::from_ints(Field::Rational, [0, 1, 2]).unwrap();
        let r = rlgp_exact(&y, &rational(2, 3), &Caps::default()).unwrap();
        // slopes ±1, ±2, ±1/2 rich at 2/3; brute force over subsets
        let cands = lines_through_two_points(&y)
            .into_iter()
            .filter(|g| is_alpha_rich(g, &y, &rational(2, 3)).unwrap())
            .collect::<Vec<_>>();
        assert_eq!(r.candidate_count, cands.len());
        let mut best = 0;
        for mask in 0u32..(1 << cands.len()) {
            let sub: Vec<AffineMap> = (0..cands.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cands[i].clone())
                .collect();
            if sub.len() > best && in_general_position(&sub).unwrap() {
                best = sub.len();
            }
        }
        assert_eq!(r.value, best);
        assert!(in_general_position(&r.witness).unwrap());
    }

    #[test]
    fn rlgp_rejects_small_alpha() {
        let y = GroundSet::from_ints(Field::Rational, [0, 1, 2]).unwrap();
        assert!(matches!(
            rlgp_exact(&y, &rational(1, 3), &Caps::default()),
            Err(Error::AlphaTooSmall { .. })
        ));
    }

    #[test]
    fn abelian_coset_examples() {
        let r = best_abelian_coset(&[q(2, 0), q(3, 0), q(1, 1)]).unwrap();
        assert_eq!(
            r.coset,
            CosetDescriptor::ConcurrencyCoset {
                point: (Scalar::from_i64(0, Field::Rational), Scalar::from_i64(0, Field::Rational))
            }
        );
        assert_eq!(r.subset, vec![q(2, 0), q(3, 0)]);
        let r = best_abelian_coset(&[q(1, 1), q(1, 2), q(1, 3)]).unwrap();
        assert_eq!(r.subset.len(), 3);
        assert!(matches!(r.coset, CosetDescriptor::TranslationCoset { .. }));
        let gp = [q(1, 0), q(2, 1), q(3, 3)];
        assert!(best_abelian_coset(&gp).unwrap().subset.len() <= 2);
    }

    #[test]
    fn full_scan_matches_enumeration() {
        let f = Field::prime(7).unwrap();
        let y = GroundSet::from_ints(f, [1, 2, 4]).unwrap();
        let alpha = rational(2, 3);
        let a = sym_fp_oracle(&y, &alpha, &Caps::default()).unwrap();
        let b = sym_set(&y, &alpha, &Caps::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&AffineMap::identity(f)));
    }
}
