use itertools::Itertools;
use num_traits::Zero;

use super::{mask_of, Matroid};
use crate::error::{input, Result};
use crate::graph::{default_labels, Multigraph};
use crate::linalg::RatMatrix;

/// U_{k,n} on labels x1..xn.
pub fn uniform(k: usize, n: usize) -> Result<Matroid> {
    if k > n {
        return input(format!("U_{{{k},{n}}} needs k <= n"));
    }
    if n > 32 {
        return input("ground set exceeds 32 elements");
    }
    let bases = (0..n).combinations(k).map(|c| mask_of(&c)).collect();
    Ok(Matroid::from_parts(default_labels(n), bases))
}

/// Spanning forests of a multigraph.
pub fn graphic(g: &Multigraph) -> Result<Matroid> {
    let r = g.vertices() - g.num_components(crate::graph::full(g.num_edges()));
    let bases = (0..g.num_edges())
        .combinations(r)
        .map(|c| mask_of(&c))
        .filter(|&m| g.components_of(m).1)
        .collect();
    Ok(Matroid::from_parts(g.labels().to_vec(), bases))
}

/// Column sets of size rank(A) with a nonzero maximal minor.
pub fn column_matroid(a: &RatMatrix) -> Result<Matroid> {
    if a.cols() > 32 {
        return input("matrix has more than 32 columns");
    }
    let rows = a.row_space_basis();
    let r = rows.rows();
    let bases = (0..a.cols())
        .combinations(r)
        .filter(|c| !rows.columns(c).det().is_zero())
        .map(|c| mask_of(&c))
        .collect();
    Ok(Matroid::from_parts(default_labels(a.cols()), bases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_one_two() {
        assert_eq!(uniform(1, 2).unwrap().bases(), &[0b01, 0b10]);
        assert!(uniform(3, 2).is_err());
    }

    #[test]
    fn triangle_is_u23() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(graphic(&g).unwrap(), uniform(2, 3).unwrap());
    }

    #[test]
    fn four_cycle_dual_is_u14() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(graphic(&g).unwrap().dual(), uniform(1, 4).unwrap());
    }

    #[test]
    fn column_matroid_small() {
        let a = RatMatrix::from_ints(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(column_matroid(&a).unwrap(), uniform(2, 3).unwrap());
        let b = RatMatrix::from_ints(&[&[1, 0, 1], &[2, 0, 2]]);
        let m = column_matroid(&b).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.is_loop(1));
    }
}
