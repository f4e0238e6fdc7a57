//! The finite transition system over abstract states.
//!
//! Abstract states are the partition cells; there is a transition from
//! cell i to cell j exactly when the one-step image of cell i meets cell
//! j. Each cell carries a unique affine mode, so its image is a single
//! zone computed once; every candidate target then costs one
//! intersection, one canonical-form pass and one emptiness check.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::pwa::{PwaSystem, Region};
use crate::reach::image_affine;
use crate::{Error, Result};

/// Abstract states in partition order plus the transition relation as
/// sorted index pairs (0-based internally; serialized 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    states: Vec<Region>,
    transitions: Vec<(usize, usize)>,
}

impl TransitionSystem {
    /// One-step forward reachability over a partitioned system.
    pub fn build(pwa: &PwaSystem) -> Result<TransitionSystem> {
        if !pwa.is_partitioned() {
            return Err(Error::NotPartitioned {
                op: "build_transitions",
            });
        }
        let states = pwa.regions().to_vec();

        // one image per source state, hoisted out of the target loop
        let images = states
            .iter()
            .map(|r| image_affine(r.zone(), r.coefficient(), r.dynamics()))
            .collect::<Result<Vec<_>>>()?;

        let count = states.len();
        let mut transitions: Vec<(usize, usize)> = (0..count * count)
            .into_par_iter()
            .filter_map(|cell| {
                let (i, j) = (cell / count, cell % count);
                let meet = images[i]
                    .intersect(states[j].zone())
                    .expect("states share one dimension")
                    .canonical_form();
                (!meet.is_empty()).then_some((i, j))
            })
            .collect();
        transitions.sort_unstable();

        Ok(TransitionSystem {
            states,
            transitions,
        })
    }

    pub(crate) fn from_parts(
        states: Vec<Region>,
        mut transitions: Vec<(usize, usize)>,
    ) -> TransitionSystem {
        transitions.sort_unstable();
        transitions.dedup();
        TransitionSystem {
            states,
            transitions,
        }
    }

    pub fn states(&self) -> &[Region] {
        &self.states
    }

    /// Sorted, deduplicated `(source, target)` pairs.
    pub fn transitions(&self) -> &[(usize, usize)] {
        &self.transitions
    }

    pub fn has_transition(&self, from: usize, to: usize) -> bool {
        self.transitions.binary_search(&(from, to)).is_ok()
    }

    /// GraphViz digraph with states r1..rK annotated by their coefficients
    /// and edges in sorted order. Output is a pure function of the system.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph abstraction {\n");
        for (idx, state) in self.states.iter().enumerate() {
            let labels: Vec<String> = state.coefficient().cols()[1..]
                .iter()
                .map(|c| c.to_string())
                .collect();
            let _ = writeln!(
                out,
                "  r{} [label=\"r{} g=({})\"];",
                idx + 1,
                idx + 1,
                labels.join(",")
            );
        }
        for (i, j) in &self.transitions {
            let _ = writeln!(out, "  r{} -> r{};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }

    /// JSON document with 1-based state ids in partition order; see
    /// [`crate::io`] for the schema and the inverse parser.
    pub fn to_json(&self) -> String {
        crate::io::transition_system_to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwa::{generate_partition, generate_pwa};
    use crate::tropical::TropicalMatrix;

    fn example_matrix() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[
            vec![None, Some(1), Some(3)],
            vec![Some(5), None, Some(4)],
            vec![Some(7), Some(8), None],
        ])
        .unwrap()
    }

    /// The thirteen transitions of the worked 3×3 example (1-based ids).
    pub(crate) const EXAMPLE_TRANSITIONS: [(usize, usize); 13] = [
        (1, 7),
        (2, 6),
        (2, 7),
        (3, 6),
        (3, 7),
        (4, 7),
        (5, 7),
        (6, 2),
        (6, 5),
        (6, 7),
        (7, 2),
        (7, 5),
        (7, 7),
    ];

    #[test]
    fn example_transition_relation() {
        let partition = generate_partition(&example_matrix()).unwrap();
        let ts = TransitionSystem::build(&partition).unwrap();
        assert_eq!(ts.states().len(), 7);
        let got: Vec<(usize, usize)> = ts
            .transitions()
            .iter()
            .map(|&(i, j)| (i + 1, j + 1))
            .collect();
        assert_eq!(got, EXAMPLE_TRANSITIONS.to_vec());
    }

    #[test]
    fn single_region_self_loop() {
        let a = TropicalMatrix::from_rows(&[vec![Some(2), None], vec![None, Some(3)]]).unwrap();
        let partition = generate_partition(&a).unwrap();
        let ts = TransitionSystem::build(&partition).unwrap();
        assert_eq!(ts.transitions(), &[(0, 0)]);
    }

    #[test]
    fn build_rejects_unpartitioned_input() {
        let pwa = generate_pwa(&example_matrix()).unwrap();
        assert!(matches!(
            TransitionSystem::build(&pwa),
            Err(Error::NotPartitioned { .. })
        ));
    }

    #[test]
    fn every_state_has_an_outgoing_transition() {
        let partition = generate_partition(&example_matrix()).unwrap();
        let ts = TransitionSystem::build(&partition).unwrap();
        for i in 0..ts.states().len() {
            assert!(ts.transitions().iter().any(|&(s, _)| s == i));
        }
    }

    #[test]
    fn dot_output_shape() {
        let partition = generate_partition(&example_matrix()).unwrap();
        let ts = TransitionSystem::build(&partition).unwrap();
        let dot = ts.to_dot();
        assert_eq!(dot.matches("->").count(), 13);
        assert!(dot.contains("r1 [label=\"r1 g=(2,1,1)\"];"));
        assert_eq!(dot, ts.to_dot());

        let empty_ts = TransitionSystem::from_parts(partition.regions().to_vec(), vec![]);
        let nodes_only = empty_ts.to_dot();
        assert_eq!(nodes_only.matches("->").count(), 0);
        assert_eq!(nodes_only.matches("label").count(), 7);
    }
}
