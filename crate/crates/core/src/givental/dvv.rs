//! Intersection numbers <tau_{d_1} ... tau_{d_n}>_g of psi classes via the
//! Virasoro/KdV recursion, memoized. This is the independent oracle used to
//! pin the recursion engine's conventions and to feed the stable-graph sums.

use crate::scalar::Rat;
use num_bigint::BigInt;
use std::cell::RefCell;
use std::collections::HashMap;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn odd_double_factorial(k: i64) -> Rat {
    // (2k-1)!! with (-1)!! = 1
    let mut acc = BigInt::from(1);
    let mut m = 2 * k - 1;
    while m >= 2 {
        acc *= m;
        m -= 2;
    }
    Rat::from(acc)
}

#[derive(Default)]
pub struct KwOracle {
    memo: RefCell<HashMap<(u32, Vec<u64>), Rat>>,
}

impl KwOracle {
    pub fn new() -> Self {
        KwOracle::default()
    }

    /// <tau_{d_1} ... tau_{d_n}>_g; zero unless sum d_i = 3g - 3 + n.
    pub fn correlator(&self, g: u32, ds: &[u64]) -> Rat {
        let n = ds.len() as u64;
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return rat(0, 1);
        }
        let dim = 3 * g as i64 - 3 + n as i64;
        let total: i64 = ds.iter().map(|&d| d as i64).sum();
        if total != dim {
            return rat(0, 1);
        }
        let mut key: Vec<u64> = ds.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.borrow().get(&(g, key.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &key);
        self.memo.borrow_mut().insert((g, key), v.clone());
        v
    }

    fn compute(&self, g: u32, sorted: &[u64]) -> Rat {
        // seeds
        if g == 0 && sorted == [0, 0, 0] {
            return rat(1, 1);
        }
        if g == 1 && sorted == [1] {
            return rat(1, 24);
        }
        // pull out the largest index
        let k = *sorted.last().unwrap() as i64;
        let rest: Vec<u64> = sorted[..sorted.len() - 1].to_vec();
        debug_assert!(k >= 1, "dimension filter leaves k >= 1 outside seeds");

        let mut rhs = rat(0, 1);
        // string/dilaton-type contractions with the other legs
        for (j, &dj) in rest.iter().enumerate() {
            let dj = dj as i64;
            if k + dj - 1 < 0 {
                continue;
            }
            let mut args: Vec<u64> = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &d)| d)
                .collect();
            args.push((k + dj - 1) as u64);
            let w = odd_double_factorial(k + dj) / odd_double_factorial(dj);
            rhs += w * self.correlator(g, &args);
        }
        // boundary terms
        let mut boundary = rat(0, 1);
        for a in 0..=(k - 2) {
            let b = k - 2 - a;
            let w = odd_double_factorial(a + 1) * odd_double_factorial(b + 1);
            // non-separating
            if g >= 1 {
                let mut args: Vec<u64> = rest.clone();
                args.push(a as u64);
                args.push(b as u64);
                boundary += w.clone() * self.correlator(g - 1, &args);
            }
            // separating: split genus and the remaining legs
            for g1 in 0..=g {
                let g2 = g - g1;
                for mask in 0..(1u32 << rest.len()) {
                    let mut left = vec![a as u64];
                    let mut right = vec![b as u64];
                    for (i, &d) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            left.push(d);
                        } else {
                            right.push(d);
                        }
                    }
                    boundary += w.clone()
                        * self.correlator(g1, &left)
                        * self.correlator(g2, &right);
                }
            }
        }
        rhs += boundary * rat(1, 2);
        rhs / odd_double_factorial(k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        let kw = KwOracle::new();
        assert_eq!(kw.correlator(0, &[0, 0, 0]), rat(1, 1));
        assert_eq!(kw.correlator(1, &[1]), rat(1, 24));
        assert_eq!(kw.correlator(1, &[0, 2]), rat(1, 24));
        assert_eq!(kw.correlator(1, &[1, 1]), rat(1, 24));
        assert_eq!(kw.correlator(2, &[4]), rat(1, 1152));
        assert_eq!(kw.correlator(2, &[2, 3]), rat(29, 5760));
        assert_eq!(kw.correlator(0, &[0, 0, 0, 1]), rat(1, 1));
        // genus 0 closed form: (n-3)! / prod d_i!
        assert_eq!(kw.correlator(0, &[0, 0, 0, 0, 2]), rat(1, 1));
        assert_eq!(kw.correlator(0, &[0, 0, 0, 1, 1]), rat(2, 1));
        // dimension filter
        assert_eq!(kw.correlator(1, &[2]), rat(0, 1));
        // genus 2 one more value: <tau_0 tau_5>_2 = <tau_4>_2 by string
        assert_eq!(kw.correlator(2, &[0, 5]), rat(1, 1152));
    }
}
