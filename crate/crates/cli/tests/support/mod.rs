//! Brute-force game-value oracle on a simplex grid, independent of the
//! simplex-method solver under test.
//!
//! The game is `max_D min_h sum_x D(x) E[h][x]` for a 0/1 loss matrix `E`.
//! Duplicate and dominated strategies are removed first (this preserves
//! the value), then the smaller side's mixed strategies are enumerated on
//! the grid of resolution `1/res`.

#![allow(dead_code)]

pub struct Reduced {
    /// rows: hypothesis strategies, columns: points
    pub matrix: Vec<Vec<u8>>,
}

impl Reduced {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// Number of strategies on the side that gets enumerated.
    pub fn dimension(&self) -> usize {
        self.rows().min(self.cols())
    }
}

fn transpose(m: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

// Keeps one copy of each vector that no other kept vector beats;
// `beats(a, b)` means a is at least as good as b everywhere.
fn undominated(vs: Vec<Vec<u8>>, beats: impl Fn(&[u8], &[u8]) -> bool) -> Vec<Vec<u8>> {
    let mut vs = vs;
    vs.sort();
    vs.dedup();
    let keep: Vec<bool> = (0..vs.len())
        .map(|i| !(0..vs.len()).any(|j| j != i && beats(&vs[j], &vs[i])))
        .collect();
    vs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect()
}

pub fn reduce(matrix: Vec<Vec<u8>>) -> Reduced {
    let mut m = matrix;
    loop {
        let (r, c) = (m.len(), m[0].len());
        // the minimizer prefers rows that are pointwise smaller
        m = undominated(m, |a, b| a.iter().zip(b).all(|(x, y)| x <= y));
        // the maximizer prefers columns that are pointwise larger
        let cols = undominated(transpose(&m), |a, b| a.iter().zip(b).all(|(x, y)| x >= y));
        m = transpose(&cols);
        if m.len() == r && m[0].len() == c {
            return Reduced { matrix: m };
        }
    }
}

fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn go(left: usize, slots: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slots == 1 {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for k in 0..=left {
            buf.push(k);
            go(left - k, slots - 1, buf, f);
            buf.pop();
        }
    }
    go(total, parts, &mut Vec::with_capacity(parts), f);
}

/// Grid estimate of the game value. Enumerates the side with fewer
/// strategies: the maximizer's grid gives a lower bound, the minimizer's
/// an upper bound.
pub fn grid_value(red: &Reduced, res: usize) -> f64 {
    let m = &red.matrix;
    let (rows, cols) = (red.rows(), red.cols());
    if cols <= rows {
        let mut best = 0usize;
        compositions(res, cols, &mut |d| {
            let worst = m
                .iter()
                .map(|row| row.iter().zip(d).map(|(&e, &w)| e as usize * w).sum::<usize>())
                .min()
                .unwrap();
            best = best.max(worst);
        });
        best as f64 / res as f64
    } else {
        let mut best = usize::MAX;
        compositions(res, rows, &mut |q| {
            let worst = (0..cols)
                .map(|x| m.iter().zip(q).map(|(row, &w)| row[x] as usize * w).sum::<usize>())
                .max()
                .unwrap();
            best = best.min(worst);
        });
        best as f64 / res as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pennies() {
        let red = reduce(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(red.dimension(), 2);
        assert_eq!(grid_value(&red, 64), 0.5);
    }

    #[test]
    fn dominated_strategies_disappear() {
        // the second row is never better than the first; column 2 is a copy
        let red = reduce(vec![vec![0, 1, 1], vec![1, 1, 1], vec![1, 0, 0]]);
        assert_eq!((red.rows(), red.cols()), (2, 2));
        assert_eq!(grid_value(&red, 64), 0.5);
    }
}
