use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{classify_structure, CpNet, LocalRelation, Outcome, Statement, ValueId, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassConstraint {
    #[default]
    Any,
    Tree,
    Polytree,
    Dpsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Complete tables of total orders.
    #[default]
    Strict,
    /// Complete tables of total preorders with some tied neighbours.
    WithIndifference,
    /// Rows may be missing or list only some of the comparisons.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomNetParams {
    pub n: usize,
    pub min_domain: usize,
    pub max_domain: usize,
    pub max_parents: usize,
    pub class: ClassConstraint,
    pub strictness: Strictness,
    pub seed: u64,
}

impl Default for RandomNetParams {
    fn default() -> Self {
        RandomNetParams {
            n: 5,
            min_domain: 2,
            max_domain: 2,
            max_parents: 2,
            class: ClassConstraint::Any,
            strictness: Strictness::Strict,
            seed: 0,
        }
    }
}

const MAX_ATTEMPTS: usize = 64;

/// A seeded random acyclic net. Variables are created in topological order,
/// so every parent has a smaller index than its child.
pub fn gen_random(params: &RandomNetParams) -> Result<CpNet> {
    let p = params;
    if p.min_domain < 2 || p.min_domain > p.max_domain {
        return Err(Error::Generator(format!(
            "domain range {}..={} is empty or below 2",
            p.min_domain, p.max_domain
        )));
    }
    if p.max_domain > ValueId::MAX as usize {
        return Err(Error::Generator("domain too large".into()));
    }
    let max_parents = match p.class {
        ClassConstraint::Tree => p.max_parents.min(1),
        _ => p.max_parents,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for _ in 0..MAX_ATTEMPTS {
        let net = attempt(p, max_parents, &mut rng);
        let class = classify_structure(&net)?;
        let ok = match p.class {
            ClassConstraint::Any => true,
            ClassConstraint::Tree => class.is_tree,
            ClassConstraint::Polytree => class.is_polytree,
            ClassConstraint::Dpsc => class.is_dpsc,
        };
        if ok {
            return Ok(net);
        }
    }
    Err(Error::Generator(format!(
        "no net matching {:?} after {MAX_ATTEMPTS} attempts",
        p.class
    )))
}

fn attempt(p: &RandomNetParams, max_parents: usize, rng: &mut ChaCha8Rng) -> CpNet {
    let mut net = CpNet::new();
    // ancestor-or-self sets and undirected components guide parent choice
    let mut reach: Vec<Vec<bool>> = Vec::with_capacity(p.n);
    let mut component: Vec<usize> = Vec::with_capacity(p.n);
    for i in 0..p.n {
        let d = rng.gen_range(p.min_domain..=p.max_domain);
        let values = (0..d).map(|j| format!("x{}_{j}", i + 1));
        let v = net
            .add_variable(Variable::new(format!("X{}", i + 1), values))
            .expect("fresh names");

        let want = rng.gen_range(0..=max_parents.min(i));
        let mut candidates: Vec<usize> = (0..i).collect();
        candidates.shuffle(rng);
        let mut parents: Vec<usize> = Vec::new();
        let mut own = vec![false; p.n];
        own[i] = true;
        for c in candidates {
            if parents.len() == want {
                break;
            }
            let fits = match p.class {
                ClassConstraint::Polytree => parents.iter().all(|&q| component[q] != component[c]),
                ClassConstraint::Dpsc => (0..i).all(|s| !(reach[c][s] && own[s])),
                _ => true,
            };
            if fits {
                for s in 0..i {
                    own[s] |= reach[c][s];
                }
                parents.push(c);
            }
        }
        parents.sort_unstable();
        let comp = parents.first().map_or(i, |&q| component[q]);
        for &q in &parents {
            let old = component[q];
            for c in component.iter_mut() {
                if *c == old {
                    *c = comp;
                }
            }
        }
        component.push(comp);
        reach.push(own);

        net.set_parents(v, parents);
        for ctx in net.contexts(v) {
            if let Some(rel) = random_row(d, p.strictness, rng) {
                net.set_row(v, ctx, rel);
            }
        }
    }
    net
}

fn random_row(d: usize, strictness: Strictness, rng: &mut impl Rng) -> Option<LocalRelation> {
    let mut order: Vec<ValueId> = (0..d as ValueId).collect();
    order.shuffle(rng);
    match strictness {
        Strictness::Strict => Some(LocalRelation::from_order(d, &order)),
        Strictness::WithIndifference => Some(LocalRelation::new(
            d,
            order.windows(2).map(|w| {
                if rng.gen_bool(0.3) {
                    Statement::indifferent(w[0], w[1])
                } else {
                    Statement::strict(w[0], w[1])
                }
            }),
        )),
        Strictness::Partial => {
            if rng.gen_bool(0.15) {
                return None;
            }
            let kept: Vec<Statement> = order
                .windows(2)
                .filter(|_| rng.gen_bool(0.6))
                .map(|w| Statement::strict(w[0], w[1]))
                .collect();
            Some(LocalRelation::new(d, kept))
        }
    }
}

pub fn random_outcome(net: &CpNet, rng: &mut impl Rng) -> Outcome {
    Outcome(
        (0..net.len())
            .map(|v| rng.gen_range(0..net.domain_size(v)) as ValueId)
            .collect(),
    )
}
