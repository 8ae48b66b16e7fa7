//! Structure constants of so(4) in the basis `X1..X6`.
//!
//! `X1 = C12, X2 = C13, X3 = C14, X4 = C23, X5 = C24, X6 = C34`, where
//! `C_ij` is the 4x4 matrix with `+1` in entry `(i, j)` and `-1` in `(j, i)`.

type Mat4 = [[i8; 4]; 4];

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const fn basis_matrix(a: usize) -> Mat4 {
    let mut m = [[0i8; 4]; 4];
    let (i, j) = PAIRS[a];
    m[i][j] = 1;
    m[j][i] = -1;
    m
}

const fn commutator(x: &Mat4, y: &Mat4) -> Mat4 {
    let mut out = [[0i8; 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            let mut s = 0i8;
            let mut k = 0;
            while k < 4 {
                s += x[i][k] * y[k][j] - y[i][k] * x[k][j];
                k += 1;
            }
            out[i][j] = s;
            j += 1;
        }
        i += 1;
    }
    out
}

/// `c[k][i][j]` with `[X_i, X_j] = sum_k c^k_ij X_k`, zero-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    c: [[[i8; 6]; 6]; 6],
}

/// The so(4) table, computed at compile time from the matrix basis.
pub const SO4: StructureConstants = StructureConstants::so4();

impl StructureConstants {
    pub const fn so4() -> Self {
        let mut c = [[[0i8; 6]; 6]; 6];
        let mut a = 0;
        while a < 6 {
            let mut b = 0;
            while b < 6 {
                let br = commutator(&basis_matrix(a), &basis_matrix(b));
                let mut k = 0;
                while k < 6 {
                    let (p, q) = PAIRS[k];
                    c[k][a][b] = br[p][q];
                    k += 1;
                }
                b += 1;
            }
            a += 1;
        }
        StructureConstants { c }
    }

    /// `c^k_ij` for one-based generator labels `k, i, j` in `1..=6`.
    pub const fn get(&self, k: usize, i: usize, j: usize) -> i8 {
        self.c[k - 1][i - 1][j - 1]
    }

    /// Coefficients of `[X_i, X_j]` in the basis, one-based labels.
    pub fn bracket(&self, i: usize, j: usize) -> [i8; 6] {
        core::array::from_fn(|k| self.c[k][i - 1][j - 1])
    }

    /// Terms `(coefficient, i, j)` with `i < j` of the Maurer-Cartan relation
    /// `d theta^k = -sum_{i<j} c^k_ij theta^i ^ theta^j`.
    pub fn maurer_cartan(&self, k: usize) -> impl Iterator<Item = (f64, usize, usize)> + '_ {
        (1..=6).flat_map(move |i| {
            (i + 1..=6).filter_map(move |j| {
                let c = self.get(k, i, j);
                (c != 0).then(|| (-f64::from(c), i, j))
            })
        })
    }

    /// Largest absolute entry of the Jacobiator over all basis triples.
    pub fn jacobi_defect(&self) -> i32 {
        let mut worst = 0i32;
        for a in 0..6 {
            for b in 0..6 {
                for d in 0..6 {
                    for m in 0..6 {
                        let mut s = 0i32;
                        for k in 0..6 {
                            s += i32::from(self.c[k][a][b]) * i32::from(self.c[m][k][d])
                                + i32::from(self.c[k][b][d]) * i32::from(self.c[m][k][a])
                                + i32::from(self.c[k][d][a]) * i32::from(self.c[m][k][b]);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_and_jacobi() {
        for k in 1..=6 {
            for i in 1..=6 {
                for j in 1..=6 {
                    assert_eq!(SO4.get(k, i, j), -SO4.get(k, j, i));
                }
            }
        }
        assert_eq!(SO4.jacobi_defect(), 0);
    }

    #[test]
    fn shared_index_brackets() {
        // [C_ij, C_ik] = -C_jk for distinct i, j, k.
        let label = |p: usize, q: usize| {
            PAIRS
                .iter()
                .position(|&x| x == (p.min(q), p.max(q)))
                .unwrap()
                + 1
        };
        let sign = |p: usize, q: usize| if p < q { 1i8 } else { -1 };
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let br = SO4.bracket(label(i, j), label(i, k));
                    let factor = sign(i, j) * sign(i, k);
                    let mut expected = [0i8; 6];
                    expected[label(j, k) - 1] = -factor * sign(j, k);
                    assert_eq!(br, expected, "[C{i}{j}, C{i}{k}]");
                }
            }
        }
    }

    #[test]
    fn disjoint_pairs_commute() {
        assert_eq!(SO4.bracket(1, 6), [0; 6]);
        assert_eq!(SO4.bracket(2, 5), [0; 6]);
        assert_eq!(SO4.bracket(3, 4), [0; 6]);
    }
}
