//! Seeded instance generators: random forests with random links, and the
//! hand-drawn configurations used as fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FapError, Result};
use crate::fixtures;
use crate::instance::{validate, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Figure1,
    Figure2,
    Figure3,
    Figure5,
    Figure6,
}

impl std::str::FromStr for Family {
    type Err = FapError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => Family::Random,
            "figure1" => Family::Figure1,
            "figure2" => Family::Figure2,
            "figure3" => Family::Figure3,
            "figure5" => Family::Figure5,
            "figure6" | "figure6-style" => Family::Figure6,
            _ => return Err(FapError::UnsatisfiableProfile(format!("unknown family `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForestShape {
    /// random trees, isolated vertices allowed
    Any,
    /// disjoint paths with at least one edge each
    Paths,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub family: Family,
    /// vertices (random family)
    pub n: usize,
    /// forest components (random family)
    pub comps: usize,
    /// links (random family)
    pub links: usize,
    pub shape: ForestShape,
    /// scale parameter of the figure families
    pub size: usize,
    /// figure2: 1 prepends a decoy link; figure6: 0 or 1 picks the drawing
    pub variant: u32,
}

impl Profile {
    pub fn random(n: usize, comps: usize, links: usize, shape: ForestShape) -> Self {
        Profile { family: Family::Random, n, comps, links, shape, size: 0, variant: 0 }
    }

    pub fn figure(family: Family, size: usize) -> Self {
        Profile { family, n: 0, comps: 0, links: 0, shape: ForestShape::Any, size, variant: 0 }
    }

    pub fn with_variant(mut self, variant: u32) -> Self {
        self.variant = variant;
        self
    }
}

const ATTEMPTS: usize = 500;

pub fn generate(seed: u64, profile: &Profile) -> Result<Instance> {
    match profile.family {
        Family::Random => random(seed, profile),
        Family::Figure1 => validate(fixtures::figure1(profile.size.max(2))),
        Family::Figure2 => validate(fixtures::figure2(profile.size.max(1), profile.variant == 1)),
        Family::Figure3 => validate(fixtures::figure3(profile.size.max(2))),
        Family::Figure5 => validate(fixtures::figure4_state().0),
        Family::Figure6 => validate(fixtures::figure6_state(profile.variant == 1).0),
    }
}

fn random(seed: u64, p: &Profile) -> Result<Instance> {
    let unsat = |m: &str| Err(FapError::UnsatisfiableProfile(m.into()));
    if p.n < 2 || p.comps == 0 || p.comps > p.n {
        return unsat("need 2 <= n and 1 <= comps <= n");
    }
    if p.shape == ForestShape::Paths && 2 * p.comps > p.n {
        return unsat("paths need at least two vertices each");
    }
    if p.links > p.n * (p.n - 1) / 2 {
        return unsat("more links than vertex pairs");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let forest = match p.shape {
            ForestShape::Any => random_forest(&mut rng, p.n, p.comps),
            ForestShape::Paths => random_paths(&mut rng, p.n, p.comps),
        };
        let mut pairs: Vec<(usize, usize)> = (0..p.n).flat_map(|u| (u + 1..p.n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        pairs.truncate(p.links);
        if let Ok(inst) = validate(Instance::new(p.n, forest, pairs)) {
            return Ok(inst);
        }
    }
    unsat("no 2-edge-connectable draw found; raise the link count")
}

fn random_forest(rng: &mut ChaCha8Rng, n: usize, comps: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut members: Vec<Vec<usize>> = order[..comps].iter().map(|&v| vec![v]).collect();
    let mut forest = Vec::new();
    for &v in &order[comps..] {
        let c = rng.gen_range(0..comps);
        let parent = members[c][rng.gen_range(0..members[c].len())];
        forest.push((parent, v));
        members[c].push(v);
    }
    forest
}

fn random_paths(rng: &mut ChaCha8Rng, n: usize, comps: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut sizes = vec![2; comps];
    for _ in 0..n - 2 * comps {
        sizes[rng.gen_range(0..comps)] += 1;
    }
    let mut forest = Vec::new();
    let mut at = 0;
    for s in sizes {
        for w in order[at..at + s].windows(2) {
            forest.push((w[0], w[1]));
        }
        at += s;
    }
    forest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::render;

    #[test]
    fn deterministic_per_seed() {
        let p = Profile::random(7, 3, 9, ForestShape::Any);
        assert_eq!(render(&generate(1, &p).unwrap()), render(&generate(1, &p).unwrap()));
    }

    #[test]
    fn figure2_shape() {
        let inst = generate(0, &Profile::figure(Family::Figure2, 5)).unwrap();
        assert_eq!(inst.n, 20);
        assert_eq!(inst.n_comp(), 10);
        assert!(inst.is_pap_without_isolated());
    }

    #[test]
    fn figure3_shape() {
        let inst = generate(0, &Profile::figure(Family::Figure3, 5)).unwrap();
        assert_eq!(inst.n, 10);
        assert_eq!(inst.n_comp(), 1);
        assert_eq!(inst.links.len(), 5);
    }

    #[test]
    fn too_few_links() {
        let p = Profile::random(6, 2, 1, ForestShape::Any);
        assert!(matches!(generate(3, &p), Err(FapError::UnsatisfiableProfile(_))));
    }

    #[test]
    fn all_figures_validate() {
        for f in [Family::Figure1, Family::Figure2, Family::Figure3, Family::Figure5, Family::Figure6] {
            for v in 0..2 {
                generate(0, &Profile::figure(f, 4).with_variant(v)).unwrap();
            }
        }
    }
}
