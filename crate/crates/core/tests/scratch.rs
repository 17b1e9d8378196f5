use gfcirc::circuit::CostModel;
use gfcirc::formula::builtin_formulas;
use gfcirc::mulsynth::{synth_karatsuba_like, MulPlan};
use gfcirc::BinPoly;

#[test]
fn phases() {
    let formulas = builtin_formulas();
    let model = CostModel::default();
    for (m, poly) in [(4usize, "x^4+x+1"), (16, "x^16+x^5+x^3+x+1")] {
        let p: BinPoly = poly.parse().unwrap();
        let c = synth_karatsuba_like(m, &p, &formulas, MulPlan::Auto).unwrap();
        let r = c.cost(&model);
        println!("m={m} total cnot={} toffoli={}", r.cnot, r.toffoli);
        for (label, (t, cn)) in &r.phases {
            println!("  {label}: toffoli={t} cnot={cn}");
        }
        if m == 4 {
            for g in c.gates() { println!("  {g:?}"); }
        }
    }
}
