//! Random automata in the uniform model and named slowly synchronizing
//! families.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::dfa::Dfa;

/// Deterministic generator algorithms accepted by [`RngSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RngAlgorithm {
    Xoshiro256PlusPlus,
}

impl RngAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            RngAlgorithm::Xoshiro256PlusPlus => "xoshiro256++",
        }
    }
}

/// A seed plus the named generator it drives. The same spec always yields
/// the same stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub algorithm: RngAlgorithm,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec {
            seed,
            algorithm: RngAlgorithm::Xoshiro256PlusPlus,
        }
    }

    /// The spec for sample `index` of a batch: same algorithm, seed offset by
    /// the index.
    pub fn for_index(self, index: u64) -> Self {
        RngSpec {
            seed: self.seed.wrapping_add(index),
            ..self
        }
    }

    pub fn rng(self) -> Xoshiro256PlusPlus {
        match self.algorithm {
            RngAlgorithm::Xoshiro256PlusPlus => Xoshiro256PlusPlus::seed_from_u64(self.seed),
        }
    }
}

/// Draws a uniformly random complete automaton: every δ(q, a) independently
/// uniform on `0..n`, drawn state by state.
pub fn random_dfa(n: usize, k: usize, spec: RngSpec) -> Dfa {
    assert!(n >= 1 && k >= 1, "random_dfa needs n >= 1 and k >= 1");
    let mut rng = spec.rng();
    random_dfa_with(n, k, &mut rng)
}

pub fn random_dfa_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Dfa {
    Dfa::from_fn(n, k, |_, _| rng.gen_range(0..n)).expect("generated transitions are in range")
}

/// The Černý automaton `C_n`: letter 0 sends state 0 to 1 and fixes every
/// other state; letter 1 is the cyclic shift `q ↦ q + 1 mod n`.
pub fn cerny(n: usize) -> Dfa {
    assert!(n >= 1, "cerny needs n >= 1");
    Dfa::from_fn(n, 2, |q, a| match (a, q) {
        (0, 0) if n > 1 => 1,
        (0, q) => q,
        _ => (q + 1) % n,
    })
    .expect("Černý transitions are in range")
}

/// A parameterized family of automata, one member per state count.
pub trait Family: Sync {
    fn name(&self) -> &str;
    fn build(&self, n: usize) -> Dfa;
}

pub struct Cerny;

impl Family for Cerny {
    fn name(&self) -> &str {
        "cerny"
    }

    fn build(&self, n: usize) -> Dfa {
        cerny(n)
    }
}

static FAMILIES: &[&dyn Family] = &[&Cerny];

/// Looks up a built-in family by name.
pub fn family(name: &str) -> Option<&'static dyn Family> {
    FAMILIES.iter().copied().find(|f| f.name() == name)
}

pub fn family_names() -> impl Iterator<Item = &'static str> {
    FAMILIES.iter().map(|f| f.name())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_state() {
        let d = random_dfa(1, 3, RngSpec::new(9));
        assert_eq!(d.rows(), vec![vec![0, 0, 0]]);
        let c = cerny(1);
        assert_eq!(c.rows(), vec![vec![0, 0]]);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_dfa(50, 2, RngSpec::new(42));
        let b = random_dfa(50, 2, RngSpec::new(42));
        let c = random_dfa(50, 2, RngSpec::new(43));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(RngSpec::new(5).for_index(3), RngSpec::new(8));
    }

    #[test]
    fn cerny_structure() {
        for n in 2..20 {
            let c = cerny(n);
            let perm = |a: usize| {
                let mut img: Vec<usize> = (0..n).map(|q| c.transition(q, a)).collect();
                img.sort_unstable();
                img.dedup();
                img.len() == n
            };
            assert!(!perm(0));
            assert!(perm(1));
            // letter 1 is one n-cycle
            let mut q = 0;
            for step in 1..=n {
                q = c.transition(q, 1);
                assert_eq!(q == 0, step == n);
            }
        }
    }

    #[test]
    fn family_lookup() {
        assert_eq!(family("cerny").unwrap().build(4), cerny(4));
        assert!(family("wielandt").is_none());
        assert_eq!(family_names().collect::<Vec<_>>(), vec!["cerny"]);
    }
}
