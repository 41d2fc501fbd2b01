//! Jordan structure of rational matrices whose eigenvalues are rational.

use num_traits::{One, Zero};

use super::matrix::{span_rank, QMatrix};
use super::rational::Rational;
use super::univariate::BPoly;
use crate::error::{Error, Result};

/// Generalised eigenvectors for one eigenvalue, grouped into Jordan chains.
///
/// A chain `[u_1, .., u_k]` satisfies `A u_1 = λ u_1` and
/// `A u_i = λ u_i + u_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenBlock {
    pub value: Rational,
    pub multiplicity: usize,
    pub chains: Vec<Vec<Vec<Rational>>>,
}

impl EigenBlock {
    /// All chain vectors, chain by chain.
    pub fn vectors(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.chains.iter().flatten()
    }
}

/// Eigenvalues ascending, each with its Jordan chains.
pub fn rational_eigenstructure(a: &QMatrix) -> Result<Vec<EigenBlock>> {
    let chi = a.char_poly()?;
    let b = BPoly::from_poly(&chi)?;
    let n = a.rows();
    let mut blocks = Vec::new();
    for factor in b.factors() {
        let lambda = &factor.root;
        let m = factor.multiplicity as usize;
        let nmat = a.sub(&QMatrix::identity(n).scale(lambda));
        // kernels of N^k until the full generalised eigenspace is reached
        let mut kernels: Vec<Vec<Vec<Rational>>> = vec![Vec::new()];
        let mut power = QMatrix::identity(n);
        loop {
            power = &power * &nmat;
            let k = power.kernel_basis();
            let done = k.len() >= m;
            kernels.push(k);
            if done {
                break;
            }
            if kernels.len() > n + 1 {
                return Err(Error::NonRationalSpectrum("generalised eigenspace did not stabilise".into()));
            }
        }
        let depth = kernels.len() - 1;
        let mut chains: Vec<Vec<Vec<Rational>>> = Vec::new();
        // vectors at each level already covered by longer chains
        for level in (1..=depth).rev() {
            let mut spanning: Vec<Vec<Rational>> = kernels[level - 1].clone();
            for chain in &chains {
                if chain.len() >= level {
                    spanning.push(chain[level - 1].clone());
                }
            }
            let mut rank = span_rank(&spanning);
            for v in &kernels[level] {
                let mut trial = spanning.clone();
                trial.push(v.clone());
                let r = span_rank(&trial);
                if r > rank {
                    rank = r;
                    spanning = trial;
                    // chain top v of length `level`
                    let mut chain = vec![v.clone()];
                    for _ in 1..level {
                        let next = nmat.mul_vec(chain.last().expect("nonempty"));
                        chain.push(next);
                    }
                    chain.reverse();
                    chains.push(chain);
                }
            }
        }
        chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
        let total: usize = chains.iter().map(Vec::len).sum();
        if total != m {
            return Err(Error::NonRationalSpectrum(format!(
                "Jordan chains for {lambda} cover {total} of {m} dimensions"
            )));
        }
        blocks.push(EigenBlock { value: lambda.clone(), multiplicity: m, chains });
    }
    Ok(blocks)
}

/// Change of basis whose columns are the chain vectors, blocks in order.
pub fn chain_basis(blocks: &[EigenBlock], n: usize) -> QMatrix {
    let cols: Vec<Vec<Rational>> = blocks.iter().flat_map(|b| b.vectors().cloned()).collect();
    QMatrix::from_columns(&cols, n)
}

/// Jordan matrix matching [`chain_basis`].
pub fn jordan_form(blocks: &[EigenBlock]) -> QMatrix {
    let n: usize = blocks.iter().map(|b| b.multiplicity).sum();
    let mut j = QMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        for chain in &b.chains {
            for i in 0..chain.len() {
                j[(at + i, at + i)] = b.value.clone();
                if i > 0 {
                    j[(at + i - 1, at + i)] = Rational::one();
                }
            }
            at += chain.len();
        }
    }
    j
}

/// Projects `v` onto each generalised eigenspace; returns one component per
/// block, in block order. The components sum to `v`.
pub fn eigen_components(blocks: &[EigenBlock], basis_inverse: &QMatrix, v: &[Rational]) -> Vec<Vec<Rational>> {
    let coords = basis_inverse.mul_vec(v);
    let n = v.len();
    let mut out = Vec::with_capacity(blocks.len());
    let mut at = 0;
    for b in blocks {
        let mut comp = vec![Rational::zero(); n];
        for u in b.vectors() {
            let c = &coords[at];
            if !c.is_zero() {
                for (x, y) in comp.iter_mut().zip(u) {
                    *x += c * y;
                }
            }
            at += 1;
        }
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    #[test]
    fn nilpotent_single_chain() {
        let a = QMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let blocks = rational_eigenstructure(&a).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].value, int(0));
        assert_eq!(blocks[0].chains.len(), 1);
        assert_eq!(blocks[0].chains[0].len(), 2);
    }

    #[test]
    fn identity_two_chains() {
        let blocks = rational_eigenstructure(&QMatrix::identity(2)).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].value, int(1));
        assert_eq!(blocks[0].chains.len(), 2);
        assert!(blocks[0].chains.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn companion_plus_minus_one() {
        // companion of s^2 - 1
        let a = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let blocks = rational_eigenstructure(&a).unwrap();
        let values: Vec<_> = blocks.iter().map(|b| b.value.clone()).collect();
        assert_eq!(values, vec![int(-1), int(1)]);
    }

    #[test]
    fn irrational_rejected() {
        let a = QMatrix::from_i64(&[&[0, 2], &[1, 0]]);
        assert!(matches!(rational_eigenstructure(&a), Err(Error::NonRationalSpectrum(_))));
    }

    #[test]
    fn reassembly() {
        let a = QMatrix::from_i64(&[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[1, 0, 0, 3]]);
        let blocks = rational_eigenstructure(&a).unwrap();
        let u = chain_basis(&blocks, 4);
        let uinv = u.inverse().unwrap();
        assert_eq!(&(&uinv * &a) * &u, jordan_form(&blocks));
    }
}
