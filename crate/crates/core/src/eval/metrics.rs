//! Pair-counting agreement between two partitions.

use crate::error::{Error, Result};
use crate::partition::Partition;

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

struct Contingency {
    cells: Vec<u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    n: u64,
}

fn contingency(p1: &Partition, p2: &Partition) -> Result<Contingency> {
    if p1.len() != p2.len() {
        return Err(Error::SizeMismatch(p1.len(), p2.len()));
    }
    let (k1, k2) = (p1.k(), p2.k());
    let mut cells = vec![0u64; k1 * k2];
    let mut rows = vec![0u64; k1];
    let mut cols = vec![0u64; k2];
    for (&a, &b) in p1.assign().iter().zip(p2.assign()) {
        cells[a * k2 + b] += 1;
        rows[a] += 1;
        cols[b] += 1;
    }
    Ok(Contingency {
        cells,
        rows,
        cols,
        n: p1.len() as u64,
    })
}

/// Fraction of node pairs on which the two partitions agree
/// (together in both, or apart in both).
pub fn rand_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    let t = contingency(p1, p2)?;
    let pairs = choose2(t.n);
    if pairs == 0.0 {
        return Ok(1.0);
    }
    let both: f64 = t.cells.iter().map(|&c| choose2(c)).sum();
    let in1: f64 = t.rows.iter().map(|&c| choose2(c)).sum();
    let in2: f64 = t.cols.iter().map(|&c| choose2(c)).sum();
    // agreeing = together in both + apart in both
    Ok((pairs + 2.0 * both - in1 - in2) / pairs)
}

/// Adjusted Rand index (Hubert & Arabie).
///
/// Returns 1 when both partitions are identical up to relabeling, including
/// the degenerate case where the expected and maximal index coincide.
pub fn ari(p1: &Partition, p2: &Partition) -> Result<f64> {
    let t = contingency(p1, p2)?;
    let pairs = choose2(t.n);
    let index: f64 = t.cells.iter().map(|&c| choose2(c)).sum();
    let a: f64 = t.rows.iter().map(|&c| choose2(c)).sum();
    let b: f64 = t.cols.iter().map(|&c| choose2(c)).sum();
    if pairs == 0.0 {
        return Ok(1.0);
    }
    let expected = a * b / pairs;
    let max = 0.5 * (a + b);
    if max == expected {
        return Ok(if index == expected { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(labels: &[usize]) -> Partition {
        Partition::from_labels(labels.to_vec())
    }

    // Pair enumeration oracles.
    fn rand_by_pairs(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let mut agree = 0;
        let mut total = 0;
        for i in 0..n {
            for j in i + 1..n {
                total += 1;
                if (a[i] == a[j]) == (b[i] == b[j]) {
                    agree += 1;
                }
            }
        }
        agree as f64 / total as f64
    }

    fn ari_by_formula(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let ka = a.iter().max().unwrap() + 1;
        let kb = b.iter().max().unwrap() + 1;
        let mut table = vec![vec![0i64; kb]; ka];
        for i in 0..n {
            table[a[i]][b[i]] += 1;
        }
        let c2 = |x: i64| (x * (x - 1) / 2) as f64;
        let sum_ij: f64 = table.iter().flatten().map(|&x| c2(x)).sum();
        let sum_a: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
        let sum_b: f64 = (0..kb).map(|j| c2(table.iter().map(|r| r[j]).sum())).sum();
        let exp = sum_a * sum_b / c2(n as i64);
        (sum_ij - exp) / ((sum_a + sum_b) / 2.0 - exp)
    }

    #[test]
    fn rand_examples() {
        assert_eq!(rand_index(&p(&[0, 0, 1, 1]), &p(&[0, 0, 1, 1])).unwrap(), 1.0);
        // pairs: (01) agree, (02) agree, (03) agree, (12) disagree, (13) disagree, (23) agree
        assert_eq!(rand_index(&p(&[0, 0, 1, 1]), &p(&[0, 1, 1, 1])).unwrap(), 0.5);
        assert_eq!(
            rand_index(&p(&[0, 0, 1, 2]), &p(&[2, 2, 0, 1])).unwrap(),
            1.0
        );
        assert!(matches!(rand_index(&p(&[0]), &p(&[0, 0])), Err(Error::SizeMismatch(1, 2))));
    }

    #[test]
    fn ari_examples() {
        assert_eq!(ari(&p(&[0, 0, 1, 1, 2]), &p(&[1, 1, 2, 2, 0])).unwrap(), 1.0);
        assert_eq!(ari(&p(&[0, 0, 1, 1, 2]), &p(&[0; 5])).unwrap(), 0.0);
        assert_eq!(ari(&p(&[0; 5]), &p(&[0; 5])).unwrap(), 1.0);
        assert!(ari(&p(&[0, 1]), &p(&[0])).is_err());
        // hand case on N = 6 with contingency [[2,1],[0,3]]:
        // sum_ij = 1 + 3 = 4, rows 3+3 = 6, cols 1+6 = 7, expected 42/15
        let v = ari(&p(&[0, 0, 0, 1, 1, 1]), &p(&[0, 0, 1, 1, 1, 1])).unwrap();
        let expected = (4.0 - 42.0 / 15.0) / (6.5 - 42.0 / 15.0);
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn metrics_match_oracles_on_small_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let n = rng.random_range(2..=8);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            assert!((rand_index(&p(&a), &p(&b)).unwrap() - rand_by_pairs(&a, &b)).abs() < 1e-12);
            let oracle = ari_by_formula(&a, &b);
            if oracle.is_finite() {
                assert!((ari(&p(&a), &p(&b)).unwrap() - oracle).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ari_is_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let a: Vec<usize> = (0..30).map(|_| rng.random_range(0..4)).collect();
            let b: Vec<usize> = (0..30).map(|_| rng.random_range(0..5)).collect();
            let mut perm: Vec<usize> = (0..5).collect();
            perm.shuffle(&mut rng);
            let b2: Vec<usize> = b.iter().map(|&x| perm[x]).collect();
            let base = ari(&p(&a), &p(&b)).unwrap();
            assert!((ari(&p(&a), &p(&b2)).unwrap() - base).abs() < 1e-12);
            assert!((ari(&p(&b2), &p(&a)).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn random_partitions_have_near_zero_ari() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mean: f64 = (0..1000)
            .map(|_| {
                let a: Vec<usize> = (0..200).map(|_| rng.random_range(0..5)).collect();
                let b: Vec<usize> = (0..200).map(|_| rng.random_range(0..5)).collect();
                ari(&p(&a), &p(&b)).unwrap()
            })
            .sum::<f64>()
            / 1000.0;
        assert!(mean.abs() < 0.02, "{mean}");
    }
}
