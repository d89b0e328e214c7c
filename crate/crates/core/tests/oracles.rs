//! Library results against independent brute-force oracles that share no code with the
//! library: their own field arithmetic, their own flag enumeration, no projective classes.

use std::collections::BTreeMap;

use twistcode::code::sweep::{weight_spectrum, SpectrumMode};
use twistcode::code::{self, minwords};
use twistcode::{Mat, ProjectiveSystem};

const GOLDEN_Q4: &str = include_str!("golden/spectrum_q4_n2_j1.csv");

/// `F_4 = F_2[w]/(w^2 + w + 1)`, elements as two-bit integers with `w = 2`.
fn f4_mul(a: u8, b: u8) -> u8 {
    let mut r = 0u8;
    for i in 0..2 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    if r & 4 != 0 {
        r ^= 0b111;
    }
    r
}

fn f4_frob(a: u8) -> u8 {
    f4_mul(a, a)
}

/// All `(x^sigma xi)` for nonzero `x`, `xi` in `F_4^3` with `xi x = 0`, one per flag.
fn f4_flags() -> Vec<[u8; 9]> {
    let normalized = |v: &[u8; 3]| v.iter().find(|&&c| c != 0) == Some(&1);
    let vectors: Vec<[u8; 3]> = (1..64u8)
        .map(|c| [c & 3, c >> 2 & 3, c >> 4 & 3])
        .filter(normalized)
        .collect();
    let mut out = Vec::new();
    for x in &vectors {
        for xi in &vectors {
            let pairing = (0..3).fold(0, |acc, i| acc ^ f4_mul(xi[i], x[i]));
            if pairing != 0 {
                continue;
            }
            let mut m = [0u8; 9];
            for r in 0..3 {
                for c in 0..3 {
                    m[r * 3 + c] = f4_mul(f4_frob(x[r]), xi[c]);
                }
            }
            out.push(m);
        }
    }
    out
}

fn f4_trace_product(x: &[u8; 9], m: &[u8; 9]) -> u8 {
    let mut t = 0;
    for a in 0..3 {
        for b in 0..3 {
            t ^= f4_mul(x[a * 3 + b], m[b * 3 + a]);
        }
    }
    t
}

fn parse_csv(text: &str) -> BTreeMap<u64, u64> {
    text.lines()
        .skip(1)
        .map(|l| {
            let (w, c) = l.split_once(',').unwrap();
            (w.parse().unwrap(), c.parse().unwrap())
        })
        .collect()
}

#[test]
fn full_spectrum_matches_naive_double_loop() {
    let flags = f4_flags();
    assert_eq!(flags.len(), 105);
    let mut oracle = BTreeMap::new();
    for code in 0..1u32 << 18 {
        let m: [u8; 9] = std::array::from_fn(|i| (code >> (2 * i) & 3) as u8);
        let w = flags.iter().filter(|x| f4_trace_product(x, &m) != 0).count() as u64;
        *oracle.entry(w).or_insert(0) += 1;
    }
    let golden = parse_csv(GOLDEN_Q4);
    assert_eq!(oracle, golden);

    let sys = ProjectiveSystem::from_params(4, 2, 1).unwrap();
    let table = weight_spectrum(&sys, SpectrumMode::Exhaustive, 2).unwrap();
    assert_eq!(table.counts, golden);
    assert_eq!(table.to_csv(), GOLDEN_Q4);
    assert_eq!(table.total(), 1 << 18);
}

#[test]
fn theta_matches_a_definitional_count() {
    // theta by brute force over all nonzero row vectors, divided by the q - 1 scalars
    let sys = ProjectiveSystem::from_params(4, 2, 1).unwrap();
    let mut rng = twistcode::rng::seeded(17, 0);
    for _ in 0..200 {
        let m = twistcode::rng::random_nonzero_matrix(&mut rng, sys.field(), 3);
        let entries: Vec<u8> = m.data().iter().map(|&e| e as u8).collect();
        let mut count = 0;
        for c in 1..64u8 {
            let xi = [c & 3, c >> 2 & 3, c >> 4 & 3];
            let xm: Vec<u8> = (0..3)
                .map(|col| (0..3).fold(0, |acc, r| acc ^ f4_mul(xi[r], entries[r * 3 + col])))
                .collect();
            let xs: Vec<u8> = xi.iter().map(|&v| f4_frob(v)).collect();
            let proportional = (1..4u8).any(|l| (0..3).all(|i| xm[i] == f4_mul(l, xs[i])));
            if xm.iter().all(|&v| v == 0) || proportional {
                count += 1;
            }
        }
        assert_eq!(code::theta(&sys, &m).unwrap().theta, count / 3);
    }
}

#[test]
fn norm_condition_examples_by_hand() {
    // M = diag(1, 1, w): solutions e_1, e_2 with lambda 1 and e_3 with lambda w, N(w) = w^3 = 1
    let sys = ProjectiveSystem::from_params(4, 2, 1).unwrap();
    let w = sys.field().primitive();
    let m = Mat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, w]]).unwrap();
    assert!(minwords::min_weight_condition_n2(&sys, &m).unwrap());
    assert_eq!(code::eval_codeword(&sys, &m).unwrap().weight(), 56);
}
