use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::PhaseQ;

/// The factor `S_index^exp` of a word in the generators of `T^n_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub index: usize,
    pub exp: i64,
}

impl Generator {
    pub fn new(index: usize, exp: i64) -> Self {
        Generator { index, exp }
    }
}

/// A word rewritten as `q^phase_exponent · S_1^{k_1} … S_n^{k_n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reordered {
    pub exponents: Vec<i64>,
    pub phase_exponent: i64,
    #[serde(skip)]
    pub phase: Complex64,
}

/// Normal-orders a word with `S_i S_{i+1} = q S_{i+1} S_i` and
/// `S_i S_j = S_j S_i` for `|i - j| ≥ 2`.
///
/// The word is bubble-sorted by index with adjacent transpositions only;
/// moving `S_i^ε` left past `S_{i+1}^δ` contributes `q^{-εδ}`.
pub fn reorder_phase(word: &[Generator], n: usize, q: PhaseQ) -> Result<Reordered> {
    if n == 0 {
        return Err(Error::invalid("n", "number of generators must be at least 1"));
    }
    if let Some(g) = word.iter().find(|g| g.index == 0 || g.index > n) {
        return Err(Error::invalid(
            "word",
            format!("generator index {} outside 1..={n}", g.index),
        ));
    }
    let mut w: Vec<Generator> = word.to_vec();
    let mut phase_exponent = 0i64;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for p in 0..w.len().saturating_sub(1) {
            let (left, right) = (w[p], w[p + 1]);
            if left.index > right.index {
                if left.index == right.index + 1 {
                    phase_exponent -= left.exp * right.exp;
                }
                w.swap(p, p + 1);
                swapped = true;
            }
        }
    }
    let mut exponents = vec![0i64; n];
    for g in &w {
        exponents[g.index - 1] += g.exp;
    }
    Ok(Reordered {
        exponents,
        phase_exponent,
        phase: q.pow(phase_exponent),
    })
}

/// `e` with `A B = q^e B A` for two words `A`, `B`.
pub fn commutation_phase(a: &[Generator], b: &[Generator], n: usize, q: PhaseQ) -> Result<i64> {
    let ab: Vec<Generator> = a.iter().chain(b).copied().collect();
    let ba: Vec<Generator> = b.iter().chain(a).copied().collect();
    let rab = reorder_phase(&ab, n, q)?;
    let rba = reorder_phase(&ba, n, q)?;
    debug_assert_eq!(rab.exponents, rba.exponents);
    Ok(rab.phase_exponent - rba.phase_exponent)
}

/// `U_j = S_1 S_3 … S_{2j-1}`, `V_j = S_{2j}` for `j = 1..=p`, and for odd
/// `n = 2p + 1` the central `Z = S_1 S_3 … S_{2p+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGenerators {
    pub u: Vec<Vec<Generator>>,
    pub v: Vec<Vec<Generator>>,
    pub z: Option<Vec<Generator>>,
}

pub fn tensor_generators(n: usize) -> TensorGenerators {
    let p = n / 2;
    let odd_prefix = |j: usize| (1..=j).map(|i| Generator::new(2 * i - 1, 1)).collect::<Vec<_>>();
    TensorGenerators {
        u: (1..=p).map(odd_prefix).collect(),
        v: (1..=p).map(|j| vec![Generator::new(2 * j, 1)]).collect(),
        z: (n % 2 == 1).then(|| odd_prefix(p + 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> Generator {
        Generator::new(i, 1)
    }

    #[test]
    fn two_one_picks_up_inverse_q() {
        let q = PhaseQ::rational(1, 5).unwrap();
        let r = reorder_phase(&[s(2), s(1)], 3, q).unwrap();
        assert_eq!(r.exponents, vec![1, 1, 0]);
        assert_eq!(r.phase_exponent, -1);
        assert_eq!(r.phase, q.pow(-1));
    }

    #[test]
    fn distant_generators_commute() {
        let q = PhaseQ::irrational(0.4).unwrap();
        let r = reorder_phase(&[s(3), s(1)], 3, q).unwrap();
        assert_eq!(r.exponents, vec![1, 0, 1]);
        assert_eq!(r.phase_exponent, 0);
    }

    #[test]
    fn inverse_powers() {
        let q = PhaseQ::irrational(0.4).unwrap();
        let r = reorder_phase(&[Generator::new(2, -1), Generator::new(1, 2)], 2, q).unwrap();
        assert_eq!(r.phase_exponent, 2);
        let r = reorder_phase(&[s(1), Generator::new(1, -1)], 2, q).unwrap();
        assert_eq!((r.exponents.clone(), r.phase_exponent), (vec![0, 0], 0));
    }

    #[test]
    fn index_out_of_range_rejected() {
        assert!(reorder_phase(&[s(4)], 3, PhaseQ::ONE).is_err());
        assert!(reorder_phase(&[], 0, PhaseQ::ONE).is_err());
    }

    #[test]
    fn tensor_split_even() {
        let q = PhaseQ::rational(1, 7).unwrap();
        let n = 4;
        let g = tensor_generators(n);
        assert_eq!(g.u[1], vec![s(1), s(3)]);
        assert_eq!(g.v[1], vec![s(4)]);
        assert!(g.z.is_none());
        for j in 0..2 {
            for k in 0..2 {
                let uv = commutation_phase(&g.u[j], &g.v[k], n, q).unwrap();
                assert_eq!(uv, if j == k { 1 } else { 0 }, "U_{} V_{}", j + 1, k + 1);
                assert_eq!(commutation_phase(&g.u[j], &g.u[k], n, q).unwrap(), 0);
                assert_eq!(commutation_phase(&g.v[j], &g.v[k], n, q).unwrap(), 0);
            }
        }
    }

    #[test]
    fn odd_case_has_central_z() {
        let q = PhaseQ::irrational(1.0).unwrap();
        for n in [1usize, 3, 5, 7] {
            let z = tensor_generators(n).z.unwrap();
            for i in 1..=n {
                assert_eq!(commutation_phase(&z, &[s(i)], n, q).unwrap(), 0, "n = {n}, S_{i}");
            }
        }
    }
}
