//! Dense linear solves at working precision.

use super::{BigFloat, Precision};
use rug::ops::Pow;

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<BigFloat>,
    pub rank: usize,
}

impl Solution {
    pub fn full_rank(&self) -> bool {
        self.rank == self.x.len()
    }
}

/// Gaussian elimination with partial pivoting on column-scaled pivots. A
/// column without a pivot above `scale * 10^(-3P/4)` is treated as
/// dependent and its unknown set to zero (the basic solution).
pub fn solve(mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>, prec: Precision) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let cutoff = prec.float(10).pow(-(prec.decimal_digits() as i32 * 3 / 4));
    let scale: Vec<BigFloat> = (0..cols)
        .map(|j| {
            a.iter()
                .map(|r| r[j].clone().abs())
                .fold(prec.zero(), |m, v| if v > m { v } else { m })
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for j in 0..cols {
        if row == rows {
            break;
        }
        let (best, mag) = (row..rows).map(|i| (i, a[i][j].clone().abs())).fold(
            (row, prec.zero()),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
        if scale[j].is_zero() || mag <= scale[j].clone() * &cutoff {
            continue;
        }
        a.swap(row, best);
        b.swap(row, best);
        let (head, tail) = a.split_at_mut(row + 1);
        let pivot_row = &head[row];
        for (offset, r) in tail.iter_mut().enumerate() {
            if r[j].is_zero() {
                continue;
            }
            let f = BigFloat::with_val(prec.bits(), &r[j] / &pivot_row[j]);
            for k in j..cols {
                let t = BigFloat::with_val(prec.bits(), &f * &pivot_row[k]);
                r[k] -= t;
            }
            let t = BigFloat::with_val(prec.bits(), &f * &b[row]);
            b[row + 1 + offset] -= t;
        }
        pivots.push((row, j));
        row += 1;
    }

    let mut x = vec![prec.zero(); cols];
    for &(r, j) in pivots.iter().rev() {
        let mut acc = b[r].clone();
        for k in j + 1..cols {
            if !x[k].is_zero() {
                acc -= BigFloat::with_val(prec.bits(), &a[r][k] * &x[k]);
            }
        }
        x[j] = acc / &a[r][j];
    }
    Solution {
        x,
        rank: pivots.len(),
    }
}

/// Least-squares fit of `y = c0 + c1 * t`, returning `(c0, c1, rms residual)`.
pub fn line_fit(t: &[BigFloat], y: &[BigFloat], prec: Precision) -> (BigFloat, BigFloat, BigFloat) {
    let n = prec.float(t.len() as u32);
    let mean = |v: &[BigFloat]| v.iter().fold(prec.zero(), |s, x| s + x) / &n;
    let (mt, my) = (mean(t), mean(y));
    let mut sxx = prec.zero();
    let mut sxy = prec.zero();
    for (ti, yi) in t.iter().zip(y) {
        let dt = BigFloat::with_val(prec.bits(), ti - &mt);
        let dy = BigFloat::with_val(prec.bits(), yi - &my);
        sxy += BigFloat::with_val(prec.bits(), &dt * &dy);
        sxx += dt.square();
    }
    let slope = sxy / sxx;
    let c0 = my - BigFloat::with_val(prec.bits(), &slope * &mt);
    let mut ss = prec.zero();
    for (ti, yi) in t.iter().zip(y) {
        let fit = BigFloat::with_val(prec.bits(), &slope * ti) + &c0;
        ss += (fit - yi).square();
    }
    let rms = (ss / n).sqrt();
    (c0, slope, rms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: Precision, rows: &[&[i32]]) -> Vec<Vec<BigFloat>> {
        rows.iter()
            .map(|r| r.iter().map(|v| p.float(*v)).collect())
            .collect()
    }

    #[test]
    fn solves_regular_system() {
        let p = Precision::digits(50);
        let a = m(p, &[&[2, 1, -1], &[-3, -1, 2], &[-2, 1, 2]]);
        let b = [8, -11, -3].map(|v| p.float(v)).to_vec();
        let s = solve(a, b, p);
        assert!(s.full_rank());
        for (x, e) in s.x.iter().zip([2, 3, -1]) {
            assert!((x.clone() - e as f64).abs() < 1e-40);
        }
    }

    #[test]
    fn flags_rank_deficiency() {
        let p = Precision::digits(50);
        let a = m(p, &[&[1, 2], &[2, 4]]);
        let b = [3, 6].map(|v| p.float(v)).to_vec();
        let s = solve(a, b, p);
        assert_eq!(s.rank, 1);
        assert!((s.x[0].clone() - 3u32).abs() < 1e-40);
        assert!(s.x[1].is_zero());
    }

    #[test]
    fn fits_a_line() {
        let p = Precision::digits(40);
        let t: Vec<_> = (0..5).map(|i| p.float(i)).collect();
        let y: Vec<_> = (0..5).map(|i| p.float(3 + 2 * i)).collect();
        let (c0, c1, rms) = line_fit(&t, &y, p);
        assert!((c0 - 3u32).abs() < 1e-35);
        assert!((c1 - 2u32).abs() < 1e-35);
        assert!(rms < 1e-35);
    }
}
