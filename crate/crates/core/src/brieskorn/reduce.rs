use super::{LatticeElement, ReducedClass};
use crate::defalg::PairData;
use crate::error::Result;
use crate::exactalg::MPoly;

/// `Σ_i ξ_i(g_i) + tr(ξ_i) g_i`, the polynomial pushed one θ-level up.
pub fn relation_image(pair: &PairData, g: &[MPoly]) -> MPoly {
    let mut out = MPoly::zero(pair.n());
    for (xi, gi) in pair.divisor.relative_fields.iter().zip(g) {
        if gi.is_zero() {
            continue;
        }
        out = &out + &xi.apply(gi);
        out.add_scaled(gi, xi.trace());
    }
    out
}

/// Reduces `θ^a p ω_1` for homogeneous `p` of degree `d` into `out`.
fn reduce_homogeneous(pair: &PairData, mut a: i32, mut p: MPoly, mut d: u32, out: &mut ReducedClass) -> Result<()> {
    while !p.is_zero() {
        let dec = pair.decompose(&p, d)?;
        out.add_term((a, dec.b, dec.e), &dec.lambda);
        if d == 0 {
            break;
        }
        p = relation_image(pair, &dec.g);
        d -= 1;
        a += 1;
    }
    Ok(())
}

/// Class of `θ^a p ω_1` for an arbitrary polynomial `p`.
pub fn reduce_poly(pair: &PairData, a: i32, p: &MPoly) -> Result<ReducedClass> {
    let mut out = ReducedClass::zero();
    for (d, comp) in p.homogeneous_components() {
        reduce_homogeneous(pair, a, comp, d, &mut out)?;
    }
    Ok(out)
}

/// Canonical form of a lattice element over `θ^a t^b e_j`.
pub fn reduce_class(pair: &PairData, el: &LatticeElement) -> Result<ReducedClass> {
    let mut out = ReducedClass::zero();
    for (a, p) in el.terms() {
        for (d, comp) in p.homogeneous_components() {
            reduce_homogeneous(pair, a as i32, comp, d, &mut out)?;
        }
    }
    Ok(out)
}

/// `[g ξ_i(f) ω_1] - θ [(ξ_i(g) + tr(ξ_i) g) ω_1]`; zero when the reduction
/// rule is consistent.
pub fn rule_residual(pair: &PairData, g: &MPoly, i: usize) -> Result<ReducedClass> {
    let xi = &pair.divisor.relative_fields[i];
    let left = reduce_poly(pair, 0, &(g * &pair.jacobian_gens[i]))?;
    let mut image = xi.apply(g);
    image.add_scaled(g, xi.trace());
    let right = reduce_poly(pair, 1, &image)?;
    Ok(left.sub(&right))
}
