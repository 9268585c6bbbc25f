//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let center = (a + b) * lit(0.5);
    let half = (b - a) * lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integral of `f` over `[a, b]`, bisecting the worst segment until the
/// summed error estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_segments: usize,
) -> (T, T) {
    let (v, e) = gk15(&mut f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        error: e,
    }];
    loop {
        let total: T = segs.iter().map(|s| s.value).sum();
        let err: T = segs.iter().map(|s| s.error).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || segs.len() >= max_segments {
            return (total, err);
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1.error
                    .partial_cmp(&y.1.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segs.swap_remove(worst);
        let mid = (s.a + s.b) * lit(0.5);
        let (v1, e1) = gk15(&mut f, s.a, mid);
        let (v2, e2) = gk15(&mut f, mid, s.b);
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            error: e2,
        });
    }
}
