//! Seeded random instance families.

use bobb_core::model::{Instance, Row};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Size limits of [`toy`] instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyShape {
    pub max_int: usize,
    /// Largest number of values an integer variable may take.
    pub max_dom: usize,
    pub max_cont: usize,
    pub max_rows: usize,
}

impl Default for ToyShape {
    fn default() -> Self {
        Self {
            max_int: 6,
            max_dom: 4,
            max_cont: 4,
            max_rows: 8,
        }
    }
}

/// A small feasible instance, small enough for lattice enumeration. Rows are
/// built around a random lattice point so that it is always feasible;
/// objectives conflict in most draws.
pub fn toy(seed: u64, shape: ToyShape) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_int = rng.gen_range(1..=shape.max_int);
    let n_cont = rng.gen_range(0..=shape.max_cont);
    let n = n_int + n_cont;
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut x0 = vec![0.0; n];
    for j in 0..n {
        if j < n_int {
            let lo = rng.gen_range(-1..=1) as f64;
            let dom = rng.gen_range(2..=shape.max_dom.max(2)) as i64;
            lower[j] = lo;
            upper[j] = lo + (dom - 1) as f64;
            x0[j] = lo + rng.gen_range(0..dom) as f64;
        } else {
            upper[j] = rng.gen_range(1..=4) as f64;
            x0[j] = rng.gen_range(0.0..upper[j]);
        }
    }
    let m = rng.gen_range(1..=shape.max_rows.max(1));
    let rows = (0..m)
        .map(|_| {
            let a: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.6) { rng.gen_range(-5..=5) as f64 } else { 0.0 })
                .collect();
            let act: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
            let slack = rng.gen_range(0..=4) as f64 + rng.gen_range(0.0..1.0);
            Row::from_dense(&a, act + slack)
        })
        .collect();
    let c1: Vec<f64> = (0..n).map(|_| rng.gen_range(-10..=10) as f64).collect();
    let conflict = rng.gen_bool(0.7);
    let c2 = c1
        .iter()
        .map(|&c| {
            if conflict {
                -c + rng.gen_range(-3..=3) as f64
            } else {
                rng.gen_range(-10..=10) as f64
            }
        })
        .collect();
    Instance::new(format!("toy-{seed}"), n_int, n_cont, c1, c2, rows, lower, upper)
        .expect("generated instance is valid")
}

/// A 60-variable, 60-row mixed-integer instance: 30 bounded general integers
/// and 30 bounded continuous variables under sparse nonnegative rows, five
/// in six of them packing (`a·x <= b`) and the rest covering (`a·x >= b`),
/// with two independent profit objectives (minimized as negated profits).
pub fn packing60(seed: u64) -> Instance {
    packing(seed, 30, 30, 60)
}

/// The generator behind [`packing60`] for other sizes. Every row holds at a
/// random lattice point, so the instance is feasible.
pub fn packing(seed: u64, n_int: usize, n_cont: usize, m: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_int + n_cont;
    let upper: Vec<f64> = (0..n)
        .map(|j| if j < n_int { rng.gen_range(1..=2) as f64 } else { rng.gen_range(1..=5) as f64 })
        .collect();
    let x0: Vec<f64> = (0..n)
        .map(|j| if j < n_int { rng.gen_range(0..=upper[j] as i64) as f64 } else { rng.gen_range(0.0..upper[j]) })
        .collect();
    let rows = (0..m)
        .map(|i| {
            let a: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.2) { rng.gen_range(1..=10) as f64 } else { 0.0 })
                .collect();
            let act: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
            if i % 6 == 5 {
                Row::from_dense(&a, (0.5 * act).floor()).negated()
            } else {
                let full: f64 = a.iter().zip(&upper).map(|(a, u)| a * u).sum();
                Row::from_dense(&a, (0.4 * full).max(act).ceil())
            }
        })
        .collect();
    let c1 = (0..n).map(|_| -(rng.gen_range(1..=20) as f64)).collect();
    let c2 = (0..n).map(|_| -(rng.gen_range(1..=20) as f64)).collect();
    Instance::new(format!("packing-{seed}"), n_int, n_cont, c1, c2, rows, vec![0.0; n], upper)
        .expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toys_respect_the_shape_and_are_feasible_somewhere() {
        let shape = ToyShape::default();
        for seed in 0..50 {
            let i = toy(seed, shape);
            assert!(i.n_int >= 1 && i.n_int <= shape.max_int);
            assert!(i.n_cont <= shape.max_cont);
            assert!(i.rows.len() <= shape.max_rows);
            for j in 0..i.n_int {
                assert!(i.upper[j] - i.lower[j] < shape.max_dom as f64);
            }
            assert!(i.lattice_size() <= 4f64.powi(6));
        }
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(toy(3, ToyShape::default()), toy(3, ToyShape::default()));
        assert_eq!(packing60(3), packing60(3));
        assert_ne!(packing60(3).c1, packing60(4).c1);
    }

    #[test]
    fn packing_shape() {
        let i = packing60(1);
        assert_eq!((i.n_int, i.n_cont, i.rows.len()), (30, 30, 60));
        assert!(i.rows.iter().all(|r| r.coefs.iter().all(|&(_, a)| a >= 0.0) || r.rhs <= 0.0));
    }
}
