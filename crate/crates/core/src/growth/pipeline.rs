//! The iterated closure pipeline with pigeonhole stage selection and pull-back.

use num_bigint::BigInt;
use serde::Serialize;

use crate::affine::{classify_coset, AffineMap, CosetDescriptor, LineRecord};
use crate::caps::{check_cap, Caps};
use crate::error::{ensure, Error, Result};
use crate::grid::GroundSet;
use crate::growth::closure::{check_members, translate_density, uniform_closure, UniformClosure};
use crate::growth::products::{distinct_sorted, triple_product};
use crate::numeric::{root_enclosure, EnclosureReport, DEFAULT_BITS};
use crate::oracle::best_abelian_coset;
use crate::report::ser_rational;
use crate::scalar::{render_rational, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub size: usize,
    /// `|E_j|` before bucketing.
    pub relation_size: usize,
    /// `|E′_j|`.
    pub retained: usize,
    pub bucket: u32,
    pub next_size: usize,
    /// `A_{j+1} ⊆ sym_{α_{j+1}}(Y)`, re-verified by direct counting.
    pub containment: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackRecord {
    pub stage: usize,
    pub element: LineRecord,
    pub coset: CosetDescriptor,
    pub hits: usize,
    pub overlap: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub depth: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha_final: Rational,
    /// `α_J ≥ 2/|Y|`.
    pub alpha_final_above_two_over_y: bool,
    pub sizes: Vec<usize>,
    pub stages: Vec<StageRecord>,
    /// `K^J = |A_J|/|A_0|`.
    pub k_power: Option<String>,
    pub k: Option<EnclosureReport>,
    pub pigeonhole_index: usize,
    /// `|A_{j*}³|/|A_{j*}|`, when enumerable.
    pub tripling: Option<String>,
    pub extracted: CosetDescriptor,
    pub extracted_size: usize,
    pub pullback: Vec<PullbackRecord>,
    pub coset: CosetDescriptor,
    pub subset: Vec<LineRecord>,
    pub overlap: usize,
    pub single_coset: bool,
}

pub fn bsg_pipeline(
    a: &[AffineMap],
    y: &GroundSet,
    alpha: &Rational,
    depth: usize,
    caps: &Caps,
) -> Result<StructureReport> {
    let a0 = distinct_sorted(a);
    if a0.is_empty() {
        return Err(Error::invalid("the pipeline needs a nonempty list"));
    }
    check_cap("pipeline input", a0.len() as u128, caps.pipeline as u128)?;
    check_members(&a0, y, alpha)?;

    let mut levels: Vec<Vec<AffineMap>> = vec![a0];
    let mut closures: Vec<UniformClosure> = Vec::with_capacity(depth);
    let mut stages = Vec::with_capacity(depth);
    let mut alpha_j = alpha.clone();
    for j in 0..depth {
        let current = &levels[j];
        let u = uniform_closure(current, y, &alpha_j)?;
        if u.products.len() > caps.stage {
            return Err(Error::StageExplosion {
                stage: j + 1,
                size: u.products.len(),
                cap: caps.stage,
            });
        }
        stages.push(StageRecord {
            stage: j,
            alpha: alpha_j.clone(),
            size: current.len(),
            relation_size: u.full.len(),
            retained: u.relation.len(),
            bucket: u.bucket,
            next_size: u.products.len(),
            // uniform_closure fails rather than return an uncertified stage
            containment: true,
        });
        alpha_j = u.alpha_next.clone();
        levels.push(u.products.clone());
        closures.push(u);
    }
    let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
    let min_alpha = Rational::new(BigInt::from(2), BigInt::from(y.len()));

    let (pigeonhole_index, k_power, k) = if depth == 0 {
        (0, None, None)
    } else {
        let big = |n: usize| BigInt::from(n);
        let (first, last) = (sizes[0], sizes[depth]);
        let j = (0..depth)
            .find(|&j| {
                big(sizes[j + 1]).pow(depth as u32) * big(first) <= big(last) * big(sizes[j]).pow(depth as u32)
            });
        ensure(j.is_some(), || format!("no pigeonhole stage among sizes {sizes:?}"))?;
        let kp = Rational::new(big(last), big(first));
        let root = root_enclosure(&kp, depth as u32, DEFAULT_BITS).to_report(12);
        (j.unwrap(), Some(render_rational(&kp)), Some(root))
    };

    let chosen = &levels[pigeonhole_index];
    let tripling = triple_product(chosen, caps.product)
        .ok()
        .map(|t| render_rational(&t.tripling));
    let extracted = best_abelian_coset(chosen)?;
    let mut coset = extracted.coset.clone();
    let mut pullback = Vec::new();
    for j in (0..pigeonhole_index).rev() {
        let step = translate_density(&levels[j], &closures[j].relation, &coset)?;
        ensure(step.overlap >= 1, || format!("pull-back to stage {j} lost every element"))?;
        coset = step.coset.clone();
        pullback.push(PullbackRecord {
            stage: j,
            element: step.element.to_record(),
            coset: step.coset,
            hits: step.hits,
            overlap: step.overlap,
        });
    }
    let subset: Vec<AffineMap> = levels[0].iter().filter(|g| coset.contains(g)).cloned().collect();
    ensure(!subset.is_empty(), || "final coset misses A".to_string())?;
    let single_coset = classify_coset(&subset)?.is_some();
    ensure(single_coset, || "final subset does not lie in one coset".to_string())?;

    Ok(StructureReport {
        alpha: alpha.clone(),
        depth,
        alpha_final_above_two_over_y: alpha_j >= min_alpha,
        alpha_final: alpha_j,
        sizes,
        stages,
        k_power,
        k,
        pigeonhole_index,
        tripling,
        extracted_size: extracted.subset.len(),
        extracted: extracted.coset,
        pullback,
        overlap: subset.len(),
        subset: subset.iter().map(AffineMap::to_record).collect(),
        coset,
        single_coset,
    })
}

impl StructureReport {
    /// `overlap ≥ |A| / d`, compared exactly.
    pub fn overlap_at_least(&self, a_len: usize, d: usize) -> bool {
        self.overlap * d >= a_len
    }
}
