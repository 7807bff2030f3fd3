use crate::error::{Error, Result, TransformCondition};
use crate::zring::{euclidean_weight_raw, is_self_dual_standard, is_type_ii, RingMatrix, RingVector, StdFormCode};

/// A base code together with the vectors `x`, `y` of a neighbor transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformSpec {
    pub base: StdFormCode,
    pub x: RingVector,
    pub y: RingVector,
}

impl TransformSpec {
    pub fn new(base: StdFormCode, x: RingVector, y: RingVector) -> Result<Self> {
        check_shapes(base.right_block(), &x, &y)?;
        Ok(Self { base, x, y })
    }
}

fn check_shapes(a: &RingMatrix, x: &RingVector, y: &RingVector) -> Result<()> {
    let m = a.modulus();
    for v in [x, y] {
        if v.modulus() != m {
            return Err(Error::ModulusMismatch { left: m.m(), right: v.modulus().m() });
        }
        if v.len() != a.cols() {
            return Err(Error::LengthMismatch { expected: a.cols(), found: v.len() });
        }
    }
    Ok(())
}

/// `A(x,y)`: row `r_i` becomes `r_i + <r_i,y> x - <r_i,x> y`.
pub fn transform_matrix(a: &RingMatrix, x: &RingVector, y: &RingVector) -> Result<RingMatrix> {
    check_shapes(a, x, y)?;
    let m = a.modulus();
    let (xs, ys) = (x.coords(), y.coords());
    let mut out = a.clone();
    for i in 0..a.rows() {
        let r = a.row(i);
        let ry = m.dot(r, ys);
        let rx = m.dot(r, xs);
        for j in 0..a.cols() {
            let v = m.sub(m.add(r[j], m.mul(ry, xs[j])), m.mul(rx, ys[j]));
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `C(A,x,y)` for a self-dual base, given `<x,x> = <y,y> = <x,y> = 0`.
pub fn neighbor_self_dual(spec: &TransformSpec) -> Result<StdFormCode> {
    let m = spec.base.modulus();
    if !is_self_dual_standard(&spec.base) {
        return Err(Error::Transform(TransformCondition::BaseSelfDual));
    }
    let (x, y) = (spec.x.coords(), spec.y.coords());
    if m.dot(x, x) != 0 {
        return Err(Error::Transform(TransformCondition::XSelfOrthogonal));
    }
    if m.dot(y, y) != 0 {
        return Err(Error::Transform(TransformCondition::YSelfOrthogonal));
    }
    if m.dot(x, y) != 0 {
        return Err(Error::Transform(TransformCondition::XYOrthogonal));
    }
    StdFormCode::new(transform_matrix(spec.base.right_block(), &spec.x, &spec.y)?)
}

/// The weight and orthogonality conditions on `x`, `y` that make
/// `C(A,x,y)` Type II when the base is: `wt_E(x) = wt_E(y) = 0 (mod 4k)`
/// and `<x,y> = 0`.
pub fn check_transform_type_ii(x: &RingVector, y: &RingVector) -> Result<()> {
    let m = x.modulus();
    let k = m.half().ok_or(Error::OddModulus { op: "neighbor_type_ii", m: m.m() })?;
    let four_k = 4 * k as u64;
    if euclidean_weight_raw(x.coords(), k) % four_k != 0 {
        return Err(Error::Transform(TransformCondition::XWeight));
    }
    if euclidean_weight_raw(y.coords(), k) % four_k != 0 {
        return Err(Error::Transform(TransformCondition::YWeight));
    }
    if crate::zring::inner_product(x, y)? != 0 {
        return Err(Error::Transform(TransformCondition::XYOrthogonal));
    }
    Ok(())
}

/// `C(A,x,y)` for a Type II base. The weight conditions force
/// `<x,x> = <y,y> = 0`, since `wt_E(v) = v*v (mod 4k)` and `v*v = <v,v>`
/// modulo `2k`.
pub fn neighbor_type_ii(spec: &TransformSpec) -> Result<StdFormCode> {
    match is_type_ii(&spec.base) {
        Ok(true) => {}
        Ok(false) => return Err(Error::Transform(TransformCondition::BaseTypeII)),
        Err(Error::NotSelfDual) => return Err(Error::Transform(TransformCondition::BaseSelfDual)),
        Err(e) => return Err(e),
    }
    check_transform_type_ii(&spec.x, &spec.y)?;
    neighbor_self_dual(spec)
}
