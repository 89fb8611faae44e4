//! Seeded random configurations and blow-ups for invariance campaigns.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::RingElem;
use crate::blowup::{apply_blowup, compare, subsets, BlowupError, BlowupSpec, CenterStratum};
use crate::model::{Component, DivisorConfiguration, Stratum};

/// One generated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomCase {
    pub config: DivisorConfiguration,
    pub spec: BlowupSpec,
}

fn random_class(rng: &mut impl Rng, with_mu: bool) -> RingElem {
    let mut out = RingElem::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let mut t = RingElem::constant(rng.gen_range(1..=3i64) * if rng.gen_bool(0.2) { -1 } else { 1 });
        if with_mu && rng.gen_bool(0.6) {
            t = &t * &RingElem::mu(rng.gen_range(1..=6));
        }
        if rng.gen_bool(0.5) {
            t = &t * &RingElem::named(&format!("W{}", rng.gen_range(0..4)));
        }
        t = t.shift_l(rng.gen_range(-1..=2));
        out += &t;
    }
    if out.is_zero() {
        RingElem::one()
    } else {
        out
    }
}

fn random_stratum(rng: &mut impl Rng, comps: BTreeSet<String>) -> Stratum {
    Stratum {
        comps,
        cover: random_class(rng, true),
        geom: Some(random_class(rng, false)),
    }
}

/// A random valid configuration (at most 4 components, ambient dimension at
/// most 4) together with a random valid blow-up whose center lies on a
/// selected component.
pub fn random_case(rng: &mut impl Rng) -> RandomCase {
    loop {
        if let Some(case) = try_case(rng) {
            return case;
        }
    }
}

fn try_case(rng: &mut impl Rng) -> Option<RandomCase> {
    let dim = rng.gen_range(2..=4i64);
    let n = rng.gen_range(1..=4usize);
    let components: Vec<Component> = (1..=n)
        .map(|i| Component::new(format!("E{i}"), rng.gen_range(1..=6), rng.gen_range(-2..=4)))
        .collect();
    let ids: BTreeSet<String> = components.iter().map(|c| c.id.clone()).collect();
    let mut strata = Vec::new();
    for s in subsets(&ids) {
        if !s.is_empty() && s.len() as i64 <= dim && rng.gen_bool(0.7) {
            strata.push(random_stratum(rng, s));
        }
    }
    if strata.is_empty() {
        return None;
    }
    let mut config = DivisorConfiguration::new(dim, components, strata);

    let k = rng.gen_range(1..=n.min(dim as usize));
    let mut pool: Vec<String> = ids.iter().cloned().collect();
    pool.shuffle(rng);
    let center_in: BTreeSet<String> = pool[..k].iter().cloned().collect();
    let rest: Vec<String> = pool[k..].to_vec();
    let ki = k as i64;

    let spec = if ki >= 2 && rng.gen_bool(0.5) {
        // codim 0: the center is E_I itself
        config.stratum(&center_in)?;
        let transversal: BTreeSet<String> = config
            .strata
            .iter()
            .filter(|s| s.comps.is_superset(&center_in))
            .flat_map(|s| s.comps.difference(&center_in).cloned().collect::<Vec<_>>())
            .collect();
        BlowupSpec {
            center_in: center_in.clone(),
            codim: 0,
            transversal,
            center_strata: Vec::new(),
            new_id: "X".into(),
        }
    } else {
        let lo = (2 - ki).max(1);
        if lo > dim - ki {
            return None;
        }
        let c = rng.gen_range(lo..=dim - ki);
        let transversal: BTreeSet<String> = rest.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let mut center_strata = Vec::new();
        for extra in subsets(&transversal) {
            let target: BTreeSet<String> = center_in.union(&extra).cloned().collect();
            let present = config.stratum(&target).is_some();
            let fits = ki + c + extra.len() as i64 <= dim;
            if extra.is_empty() {
                if !present || !fits {
                    return None;
                }
                center_strata.push(CenterStratum {
                    extra,
                    cover: random_class(rng, true),
                    geom: Some(random_class(rng, false)),
                });
            } else if present {
                let (cover, geom) = if fits && rng.gen_bool(0.7) {
                    (random_class(rng, true), random_class(rng, false))
                } else {
                    (RingElem::zero(), RingElem::zero())
                };
                center_strata.push(CenterStratum {
                    extra,
                    cover,
                    geom: Some(geom),
                });
            }
        }
        BlowupSpec {
            center_in: center_in.clone(),
            codim: c,
            transversal,
            center_strata,
            new_id: "X".into(),
        }
    };

    let mut selection: BTreeSet<String> = ids.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let anchor = center_in.iter().collect::<Vec<_>>().choose(rng).map(|s| (*s).clone())?;
    selection.insert(anchor);
    config.selection = selection;
    Some(RandomCase { config, spec })
}

/// Result of checking one random case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub index: usize,
    pub zeta_equal: bool,
    pub naive_equal: bool,
    /// Whether raising the new component's discrepancy by one was detected.
    pub control_detected: bool,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.zeta_equal && self.naive_equal && self.control_detected
    }
}

/// Generates `n` cases from `seed` and checks each one, in parallel.
pub fn run_campaign(n: usize, seed: u64) -> Result<Vec<CaseOutcome>, BlowupError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<RandomCase> = (0..n).map(|_| random_case(&mut rng)).collect();
    cases
        .par_iter()
        .enumerate()
        .map(|(index, case)| check_case(index, case))
        .collect()
}

pub fn check_case(index: usize, case: &RandomCase) -> Result<CaseOutcome, BlowupError> {
    let after = apply_blowup(&case.config, &case.spec)?;
    let rep = compare(&case.config, &after)?;
    let mut corrupted = after;
    corrupted.components.last_mut().expect("new component").nu += 1;
    let bad = compare(&case.config, &corrupted)?;
    Ok(CaseOutcome {
        index,
        zeta_equal: rep.zeta_equal,
        naive_equal: rep.naive_equal == Some(true),
        control_detected: !bad.zeta_equal && bad.naive_equal == Some(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::validate_blowup;

    #[test]
    fn cases_are_valid_and_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_case(&mut a);
            assert_eq!(x, random_case(&mut b));
            assert!(validate_blowup(&x.config, &x.spec).is_empty(), "{:?}", validate_blowup(&x.config, &x.spec));
        }
    }

    #[test]
    fn small_campaign_passes() {
        let out = run_campaign(20, 1).unwrap();
        for o in &out {
            assert!(o.passed(), "{o:?}");
        }
    }
}
