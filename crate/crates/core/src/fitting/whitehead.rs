use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use super::lattice::{CentralLattice, Exactness};
use crate::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use crate::linalg::Matrix;
use crate::scalars::{CycloElement, Rational};
use crate::synth::rng;

#[derive(Clone, Debug)]
pub struct WhiteheadConfig {
    pub size_bound: usize,
    pub stall_rounds: usize,
    /// Random matrices per size per round.
    pub batch: usize,
    pub max_rounds: usize,
    pub seed: u64,
    /// Enumerate even when G is abelian.
    pub force_enumeration: bool,
}

impl Default for WhiteheadConfig {
    fn default() -> Self {
        WhiteheadConfig {
            size_bound: 3,
            stall_rounds: 3,
            batch: 48,
            max_rounds: 40,
            seed: 0x5eed,
            force_enumeration: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WhiteheadEstimate {
    pub lattice: CentralLattice,
    pub rounds: usize,
    /// Lattice after each round.
    pub snapshots: Vec<CentralLattice>,
}

/// 0, ±g for every g, 1 + g for g ≠ 1, and p.
pub fn default_entry_pool(ga: &GroupAlgebra, p: u64) -> Vec<GroupRingElement> {
    let n = ga.order();
    let mut pool = vec![GroupRingElement::zero(n)];
    for g in 0..n {
        let b = GroupRingElement::basis(n, g);
        pool.push(b.neg());
        if g != 0 {
            pool.push(b.add(&GroupRingElement::one(n)));
        }
        pool.push(b);
    }
    pool.push(GroupRingElement::scalar(
        n,
        CycloElement::from_int(p as i64),
    ));
    pool
}

fn canonical_pool(pool: &[GroupRingElement]) -> Vec<GroupRingElement> {
    let mut keyed: Vec<(Vec<String>, GroupRingElement)> = pool
        .iter()
        .map(|x| {
            (
                x.coeffs().iter().map(|c| c.to_string()).collect(),
                x.clone(),
            )
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, x)| x).collect()
}

pub fn whitehead_lattice_estimate(
    ga: &Arc<GroupAlgebra>,
    p: u64,
    entry_pool: &[GroupRingElement],
    size_bound: usize,
    stall_rounds: usize,
) -> CentralLattice {
    let cfg = WhiteheadConfig {
        size_bound,
        stall_rounds,
        ..Default::default()
    };
    whitehead_estimate_with(ga, p, entry_pool, &cfg).lattice
}

pub fn whitehead_estimate_with(
    ga: &Arc<GroupAlgebra>,
    p: u64,
    entry_pool: &[GroupRingElement],
    cfg: &WhiteheadConfig,
) -> WhiteheadEstimate {
    if ga.is_abelian() && !cfg.force_enumeration {
        let l = CentralLattice::group_ring_centre(ga, p);
        return WhiteheadEstimate {
            lattice: l.clone(),
            rounds: 0,
            snapshots: vec![l],
        };
    }
    let pool = canonical_pool(entry_pool);
    let n = ga.order();
    let mut r = rng(cfg.seed);
    let mut lat = CentralLattice::zero(ga, p, Exactness::ApproximateFromBelow);
    let mut seeds: Vec<GrMatrix> = pool
        .iter()
        .map(|x| Matrix::new(1, 1, vec![x.clone()]))
        .collect();
    let one = GroupRingElement::one(n);
    let zero = GroupRingElement::zero(n);
    seeds.push(Matrix::new(1, 1, vec![one.neg()]));
    seeds.push(Matrix::new(
        2,
        2,
        vec![zero.clone(), one.clone(), one.clone(), zero],
    ));
    let mut snapshots = Vec::new();
    let mut stall = 0;
    let mut rounds = 0;
    while rounds < cfg.max_rounds && stall < cfg.stall_rounds {
        let mut cands = std::mem::take(&mut seeds);
        for s in 2..=cfg.size_bound.max(1) {
            for _ in 0..cfg.batch {
                let m = Matrix::from_fn(s, s, |_, _| pool[r.gen_range(0..pool.len())].clone());
                cands.push(m);
            }
        }
        let norms: Vec<CentralElement> = cands
            .par_iter()
            .map(|m| ga.reduced_norm(m).expect("square"))
            .collect();
        let mut grew = false;
        for z in norms {
            grew |= lat
                .insert(z)
                .expect("reduced norms of rational matrices are rational");
        }
        // nr(diag(M, N)) = nr(M)·nr(N)
        let basis = lat.basis();
        for x in &basis {
            for y in &basis {
                grew |= lat.insert(x.mul(y)).expect("rational");
            }
        }
        rounds += 1;
        stall = if grew { 0 } else { stall + 1 };
        snapshots.push(lat.clone());
    }
    WhiteheadEstimate {
        lattice: lat,
        rounds,
        snapshots,
    }
}

type XiKey = (String, u64);

/// Estimate with the default pool and configuration, computed once per (group, p).
pub fn default_whitehead(ga: &Arc<GroupAlgebra>, p: u64) -> CentralLattice {
    static CACHE: OnceLock<Mutex<HashMap<XiKey, CentralLattice>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (ga.name().to_string(), p);
    if let Some(l) = cache.lock().unwrap().get(&key) {
        if Arc::ptr_eq(l.algebra(), ga) || l.algebra().name() == ga.name() {
            return l.clone();
        }
    }
    let l = whitehead_lattice_estimate(ga, p, &default_entry_pool(ga, p), 3, 3);
    cache.lock().unwrap().insert(key, l.clone());
    l
}

/// |G|·Σ_χ χ(1)⁻¹ δ_χ e_χ, and 1 for abelian G.
#[derive(Clone, Debug)]
pub struct DenominatorWitness {
    pub element: CentralElement,
    pub label: &'static str,
}

pub fn denominator_witnesses(ga: &GroupAlgebra, delta: &[CycloElement]) -> Vec<DenominatorWitness> {
    let n = ga.order() as i64;
    let comps = (0..ga.num_chars())
        .map(|chi| {
            let f = CycloElement::from(Rational::new(n.into(), (ga.degree(chi) as i64).into()));
            &f * &delta[chi]
        })
        .collect();
    let mut out = vec![DenominatorWitness {
        element: CentralElement::new(comps),
        label: "johnston-nickel",
    }];
    if ga.is_abelian() {
        out.push(DenominatorWitness {
            element: ga.central_one(),
            label: "abelian-candidate",
        });
    }
    out
}
