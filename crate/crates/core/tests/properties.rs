use mqg_core::circuit::{word_to_bits, Circuit, QubitRef, Toffoli};
use mqg_core::oracle::{mcx_reference, network_reference};
use mqg_core::sim::{run_all, run_all_restricted, run_basis, CompiledCircuit};
use mqg_core::synth::{synth_baseline_dirty, synth_mqg_network, BaselineLayout, SynthesisSpec};
use mqg_core::{parse, serialize};
use proptest::prelude::*;

fn n1() -> Circuit {
    synth_mqg_network(SynthesisSpec::new(1).unwrap())
}

/// Random circuit on `q` qubits: each layer is a random set of disjoint gates.
fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (3usize..10).prop_flat_map(|q| {
        let layer = Just((0..q).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_flat_map(move |perm| {
                (1..=q / 3).prop_map(move |k| {
                    (0..k)
                        .map(|i| Toffoli::new(perm[3 * i], perm[3 * i + 1], perm[3 * i + 2]))
                        .collect::<Vec<_>>()
                })
            });
        prop::collection::vec(layer, 0..6).prop_map(move |layers| {
            let roles = (0..q as u32).map(QubitRef::b).collect();
            let mut c = Circuit::new(roles).unwrap();
            for l in layers {
                c.push_layer(l).unwrap();
            }
            c
        })
    })
}

proptest! {
    #[test]
    fn format_round_trip(c in arb_circuit()) {
        let text = serialize(&c);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn layers_are_involutions(c in arb_circuit(), w in any::<u64>()) {
        let w = w & ((1u64 << c.num_qubits()) - 1);
        for layer in c.layers() {
            prop_assert_eq!(layer.apply_word(layer.apply_word(w)), w);
        }
    }

    #[test]
    fn gate_order_within_layer_is_irrelevant(seed in any::<u64>(), w in 0u64..512) {
        let c = n1();
        let mut shuffled = Circuit::new(c.roles().to_vec()).unwrap();
        for (i, layer) in c.layers().iter().enumerate() {
            let mut gates = layer.gates().to_vec();
            let r = (seed.rotate_left(i as u32) as usize) % gates.len();
            gates.rotate_left(r);
            gates.reverse();
            shuffled.push_layer(gates).unwrap();
        }
        let bits = word_to_bits(w, 9);
        prop_assert_eq!(run_basis(&c, &bits).unwrap(), run_basis(&shuffled, &bits).unwrap());
    }
}

#[test]
fn network_is_an_involution() {
    for n in [1, 2] {
        let c = synth_mqg_network(SynthesisSpec::new(n).unwrap());
        let compiled = CompiledCircuit::new(&c).unwrap();
        for w in 0..1u64 << c.num_qubits() {
            assert_eq!(compiled.apply(compiled.apply(w)), w);
        }
    }
}

#[test]
fn mutated_file_fails_exhaustive_check() {
    let s = SynthesisSpec::new(1).unwrap();
    let text = serialize(&synth_mqg_network(s));
    // drop the last gate line
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let mutated = parse(&(lines.join("\n") + "\n")).unwrap();
    assert!(!run_all(&mutated, network_reference(s), 24).unwrap().pass);
}

#[test]
fn baseline_exhaustive_with_dirty_ancillas() {
    for m in 3..=5 {
        let c = synth_baseline_dirty(m).unwrap();
        let lay = BaselineLayout { controls: m };
        let controls: Vec<usize> = (1..=m).map(|i| lay.control(i)).collect();
        let r = run_all(&c, mcx_reference(&controls, lay.target()), 24).unwrap();
        assert!(r.pass, "m={m}: {:?}", r.counterexample);
        assert_eq!(r.states_checked, 1 << (2 * m - 1));
    }
}

#[test]
fn baseline_m4_dirty_example() {
    let c = synth_baseline_dirty(4).unwrap();
    let lay = BaselineLayout { controls: 4 };
    let mut bits = vec![false; 7];
    for i in 1..=4 {
        bits[lay.control(i)] = true;
    }
    bits[lay.ancilla(1)] = true;
    bits[lay.ancilla(2)] = true;
    let out = run_basis(&c, &bits).unwrap();
    assert!(out[lay.target()]);
    assert!(out[lay.ancilla(1)] && out[lay.ancilla(2)]);
}

#[test]
fn padded_c4_over_free_qubits() {
    let s = SynthesisSpec::new(1).unwrap();
    let c = synth_mqg_network(s);
    let lay = s.layout();
    let pinned = lay.c(2);
    let free: Vec<usize> = (0..9).filter(|&q| q != pinned).collect();
    let controls = [lay.a(0), lay.b(1), lay.c(1), lay.b(2)];
    let r = run_all_restricted(
        &c,
        mcx_reference(&controls, lay.target()),
        &free,
        1 << pinned,
        24,
    )
    .unwrap();
    assert!(r.pass);
    assert_eq!(r.states_checked, 256);
}
