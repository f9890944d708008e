//! Dense complex matrices: candidate [`FloatMatrix`] and validated [`BallMatrix`].

use std::ops::{Index, IndexMut};

use rug::Float;

use crate::ball::{Ball, BallFloat};
use crate::complex::ComplexBall;
use crate::error::BallError;
use crate::mag::Mag;
use crate::scalar::{conj, Cplx, MpFloat, RealScalar};

/// Dense row-major complex matrix of candidate values (no radii).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<R>>,
}

impl<R: RealScalar> FloatMatrix<R> {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        let z = Cplx::new(R::from_f64_prec(0.0, prec), R::from_f64_prec(0.0, prec));
        FloatMatrix {
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = FloatMatrix::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = Cplx::new(R::from_f64_prec(1.0, prec), R::from_f64_prec(0.0, prec));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FloatMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cplx<R>>) -> Result<Self, BallError> {
        if data.len() != rows * cols {
            return Err(BallError::Dimension(format!(
                "{} entries for {rows}x{cols}",
                data.len()
            )));
        }
        Ok(FloatMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Cplx<R>] {
        &self.data
    }

    pub fn prec(&self) -> u32 {
        self.data.first().map(|z| z.re.prec()).unwrap_or(53)
    }

    pub fn adjoint(&self) -> Self {
        FloatMatrix::from_fn(self.cols, self.rows, |i, j| conj(&self[(j, i)]))
    }

    pub fn mul(&self, o: &Self) -> Result<Self, BallError> {
        if self.cols != o.rows {
            return Err(BallError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let p = self.prec().max(o.prec());
        let mut out = FloatMatrix::zeros(self.rows, o.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a * &o[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, BallError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(BallError::Dimension("sub".into()));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Ok(FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Zero the strict lower triangle.
    pub fn upper_triangular(&self) -> Self {
        let z = Cplx::new(
            R::from_f64_prec(0.0, self.prec()),
            R::from_f64_prec(0.0, self.prec()),
        );
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| {
            if i > j {
                z.clone()
            } else {
                self[(i, j)].clone()
            }
        })
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        FloatMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<Cplx<R>> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Frobenius norm as an `f64` estimate (not validated).
    pub fn frobenius_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|z| {
                let a = z.re.to_f64();
                let b = z.im.to_f64();
                a * a + b * b
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn map<S: RealScalar>(&self, f: impl Fn(&R) -> S) -> FloatMatrix<S> {
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Cplx::new(f(&z.re), f(&z.im)))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> FloatMatrix<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn to_mp(&self, prec: u32) -> FloatMatrix<MpFloat> {
        self.map(|x| MpFloat(Float::with_val(prec, x.to_f64())))
    }
}

impl FloatMatrix<MpFloat> {
    /// Round every entry to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        self.map(|x| x.with_prec(prec))
    }
}

impl FloatMatrix<f64> {
    /// Lift an `f64` matrix exactly into `prec`-bit entries.
    pub fn lift(&self, prec: u32) -> FloatMatrix<MpFloat> {
        self.map(|x| MpFloat(Float::with_val(prec.max(53), *x)))
    }
}

impl<R: RealScalar> Index<(usize, usize)> for FloatMatrix<R> {
    type Output = Cplx<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<R> {
        &self.data[i * self.cols + j]
    }
}

impl<R: RealScalar> IndexMut<(usize, usize)> for FloatMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<R> {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense row-major matrix of complex balls.
#[derive(Clone, Debug, PartialEq)]
pub struct BallMatrix<F: BallFloat> {
    rows: usize,
    cols: usize,
    data: Vec<ComplexBall<F>>,
}

impl<F: BallFloat> BallMatrix<F> {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        BallMatrix {
            rows,
            cols,
            data: vec![ComplexBall::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = BallMatrix::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = ComplexBall::one(prec);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ComplexBall<F>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BallMatrix { rows, cols, data }
    }

    pub fn from_vec(
        rows: usize,
        cols: usize,
        data: Vec<ComplexBall<F>>,
    ) -> Result<Self, BallError> {
        if data.len() != rows * cols {
            return Err(BallError::Dimension(format!(
                "{} entries for {rows}x{cols}",
                data.len()
            )));
        }
        Ok(BallMatrix { rows, cols, data })
    }

    /// Exact balls around candidate entries.
    pub fn from_float(m: &FloatMatrix<F>) -> Self {
        BallMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(ComplexBall::exact).collect(),
        }
    }

    pub fn mid(&self) -> FloatMatrix<F> {
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.mid()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[ComplexBall<F>] {
        &self.data
    }

    pub fn prec(&self) -> u32 {
        self.data.first().map(|z| z.prec()).unwrap_or(53)
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexBall<F> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ComplexBall<F>) {
        self.data[i * self.cols + j] = v;
    }

    fn same_shape(&self, o: &Self, what: &str) -> Result<(), BallError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(BallError::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self, prec: u32) -> Result<Self, BallError> {
        self.same_shape(o, "add")?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.add(b, prec))
            .collect();
        Ok(BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Result<Self, BallError> {
        self.same_shape(o, "sub")?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.sub(b, prec))
            .collect();
        Ok(BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &ComplexBall<F>, prec: u32) -> Self {
        let data = self.data.iter().map(|a| a.mul(s, prec)).collect();
        BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn adjoint(&self) -> Self {
        BallMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        BallMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `s·I − self` for square matrices.
    pub fn shift_neg(&self, s: &ComplexBall<F>, prec: u32) -> Result<Self, BallError> {
        if self.rows != self.cols {
            return Err(BallError::Dimension("shift of a non-square matrix".into()));
        }
        let n = self.rows;
        Ok(BallMatrix::from_fn(n, n, |i, j| {
            let a = self.get(i, j).neg();
            if i == j {
                a.add(s, prec)
            } else {
                a
            }
        }))
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Result<Self, BallError> {
        if self.cols != o.rows {
            return Err(BallError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(F::ball_matmul(self, o, prec))
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        BallMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Does every entry of `self` contain the corresponding entry of `o`?
    pub fn contains(&self, o: &Self) -> bool {
        self.rows == o.rows
            && self.cols == o.cols
            && self.data.iter().zip(&o.data).all(|(a, b)| a.contains(b))
    }

    /// Largest entry radius.
    pub fn max_rad(&self) -> Mag {
        self.data
            .iter()
            .fold(Mag::ZERO, |m, z| m.max(z.re.rad()).max(z.im.rad()))
    }

    fn abs_entries(&self) -> Vec<Mag> {
        self.data.iter().map(|z| z.abs_upper()).collect()
    }

    /// Upper bound on the induced 1-norm (maximum column sum).
    pub fn norm1_upper(&self) -> Mag {
        let a = self.abs_entries();
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Mag::ZERO, |s, i| s.add_up(&a[i * self.cols + j])))
            .fold(Mag::ZERO, Mag::max)
    }

    /// Upper bound on the induced ∞-norm (maximum row sum).
    pub fn norminf_upper(&self) -> Mag {
        let a = self.abs_entries();
        (0..self.rows)
            .map(|i| {
                a[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .fold(Mag::ZERO, |s, x| s.add_up(x))
            })
            .fold(Mag::ZERO, Mag::max)
    }

    pub fn frobenius_upper(&self) -> Mag {
        self.abs_entries()
            .iter()
            .fold(Mag::ZERO, |s, x| s.add_up(&x.mul_up(x)))
            .sqrt_up()
    }

    /// Upper bound on the spectral norm: `min(√(‖A‖₁‖A‖∞), ‖A‖_F)`.
    pub fn norm2_upper_mag(&self) -> Mag {
        let a = self.abs_entries();
        let mut colsum = vec![Mag::ZERO; self.cols];
        let mut rowmax = Mag::ZERO;
        let mut fro = Mag::ZERO;
        for i in 0..self.rows {
            let mut r = Mag::ZERO;
            for j in 0..self.cols {
                let x = &a[i * self.cols + j];
                r = r.add_up(x);
                colsum[j] = colsum[j].add_up(x);
                fro = fro.add_up(&x.mul_up(x));
            }
            rowmax = rowmax.max(r);
        }
        let colmax = colsum.into_iter().fold(Mag::ZERO, Mag::max);
        colmax.mul_up(&rowmax).sqrt_up().min(fro.sqrt_up())
    }

    /// [`Self::norm2_upper_mag`] as a radius-free ball at the upper bound.
    pub fn norm2_upper(&self) -> Ball<F> {
        let p = self.prec();
        Ball::exact(F::from_mag_up(&self.norm2_upper_mag(), p))
    }

    /// The same matrix with arbitrary-precision midpoints.
    pub fn to_mp_matrix(&self) -> BallMatrix<MpFloat> {
        BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.to_complex_mp()).collect(),
        }
    }

    /// `I − self` for square matrices.
    pub fn identity_minus(&self, prec: u32) -> Result<Self, BallError> {
        self.shift_neg(&ComplexBall::one(prec), prec)
    }
}

impl BallMatrix<MpFloat> {
    /// Round to a double-precision ball matrix, absorbing conversion errors.
    pub fn to_f64_ball(&self) -> BallMatrix<f64> {
        BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.to_f64_ball()).collect(),
        }
    }
}

impl BallMatrix<f64> {
    pub fn to_mp_ball(&self) -> BallMatrix<MpFloat> {
        BallMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(ComplexBall::from).collect(),
        }
    }
}

/// Entrywise ball dot products in fixed left-to-right order.
pub fn matmul_generic<F: BallFloat>(
    a: &BallMatrix<F>,
    b: &BallMatrix<F>,
    prec: u32,
) -> BallMatrix<F> {
    let (n, kk, m) = (a.rows, a.cols, b.cols);
    let am: Vec<(Mag, Mag)> = a
        .data
        .iter()
        .map(|z| (z.re.mid().mag(), z.im.mid().mag()))
        .collect();
    let bm: Vec<(Mag, Mag)> = b
        .data
        .iter()
        .map(|z| (z.re.mid().mag(), z.im.mid().mag()))
        .collect();
    let zero = |z: &ComplexBall<F>| z.is_exact() && z.re.mid().is_zero() && z.im.mid().is_zero();
    let az: Vec<bool> = a.data.iter().map(zero).collect();
    let bz: Vec<bool> = b.data.iter().map(zero).collect();
    let mut data = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let mut re = F::zero_at(prec);
            let mut im = F::zero_at(prec);
            let mut err = Mag::ZERO;
            let mut rre = Mag::ZERO;
            let mut rim = Mag::ZERO;
            for k in 0..kk {
                let ia = i * kk + k;
                let ib = k * m + j;
                if az[ia] || bz[ib] {
                    continue;
                }
                let x = &a.data[ia];
                let y = &b.data[ib];
                let (xr, xi) = (x.re.mid(), x.im.mid());
                let (yr, yi) = (y.re.mid(), y.im.mid());
                err = err.add_up(&F::fma_acc(&mut re, xr, yr, prec));
                err = err.add_up(&F::fma_acc(&mut re, &-xi.clone(), yi, prec));
                err = err.add_up(&F::fma_acc(&mut im, xr, yi, prec));
                err = err.add_up(&F::fma_acc(&mut im, xi, yr, prec));
                let (axr, axi) = am[ia];
                let (ayr, ayi) = bm[ib];
                let (rxr, rxi) = (x.re.rad(), x.im.rad());
                let (ryr, ryi) = (y.re.rad(), y.im.rad());
                if rxr.is_zero() && rxi.is_zero() && ryr.is_zero() && ryi.is_zero() {
                    continue;
                }
                let wyr = ayr.add_up(&ryr);
                let wyi = ayi.add_up(&ryi);
                rre = rre
                    .add_up(&axr.mul_up(&ryr))
                    .add_up(&rxr.mul_up(&wyr))
                    .add_up(&axi.mul_up(&ryi))
                    .add_up(&rxi.mul_up(&wyi));
                rim = rim
                    .add_up(&axr.mul_up(&ryi))
                    .add_up(&rxr.mul_up(&wyi))
                    .add_up(&axi.mul_up(&ryr))
                    .add_up(&rxi.mul_up(&wyr));
            }
            data.push(ComplexBall::new(
                Ball::new(re, rre.add_up(&err)),
                Ball::new(im, rim.add_up(&err)),
            ));
        }
    }
    BallMatrix {
        rows: n,
        cols: m,
        data,
    }
}

/// Real `n×k` times `k×m`, row-major, fixed summation order.
fn gemm(a: &[f64], b: &[f64], n: usize, k: usize, m: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * m];
    for i in 0..n {
        let crow = &mut c[i * m..(i + 1) * m];
        for p in 0..k {
            let x = a[i * k + p];
            if x == 0.0 {
                continue;
            }
            let brow = &b[p * m..(p + 1) * m];
            for (cj, bj) in crow.iter_mut().zip(brow) {
                *cj += x * bj;
            }
        }
    }
    c
}

fn add_into(acc: &mut [f64], x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// Midpoint–radius product for double-precision balls using a priori
/// floating-point error bounds on plain matrix products.
pub fn matmul_f64(a: &BallMatrix<f64>, b: &BallMatrix<f64>) -> BallMatrix<f64> {
    let (n, kk, m) = (a.rows, a.cols, b.cols);
    let split = |x: &BallMatrix<f64>| {
        let re: Vec<f64> = x.data.iter().map(|z| *z.re.mid()).collect();
        let im: Vec<f64> = x.data.iter().map(|z| *z.im.mid()).collect();
        let rre: Vec<f64> = x.data.iter().map(|z| z.re.rad().to_f64_up()).collect();
        let rim: Vec<f64> = x.data.iter().map(|z| z.im.rad().to_f64_up()).collect();
        (re, im, rre, rim)
    };
    let (ar, ai, rar, rai) = split(a);
    let (br, bi, rbr, rbi) = split(b);
    let abs = |v: &[f64]| v.iter().map(|x| x.abs()).collect::<Vec<f64>>();
    let (aar, aai, abr, abi) = (abs(&ar), abs(&ai), abs(&br), abs(&bi));
    let nz = |v: &[f64]| v.iter().any(|x| *x != 0.0);
    let a_has_rad = nz(&rar) || nz(&rai);
    let b_has_rad = nz(&rbr) || nz(&rbi);
    let a_has_im = nz(&ai);
    let b_has_im = nz(&bi);

    // midpoints
    let mut cre = gemm(&ar, &br, n, kk, m);
    let mut cim = vec![0.0; n * m];
    // magnitude products bounding the midpoint rounding error
    let mut ere = gemm(&aar, &abr, n, kk, m);
    let mut eim = vec![0.0; n * m];
    if a_has_im && b_has_im {
        let p = gemm(&ai, &bi, n, kk, m);
        for (c, x) in cre.iter_mut().zip(&p) {
            *c -= x;
        }
        add_into(&mut ere, &gemm(&aai, &abi, n, kk, m));
    }
    if b_has_im {
        cim = gemm(&ar, &bi, n, kk, m);
        eim = gemm(&aar, &abi, n, kk, m);
    }
    if a_has_im {
        add_into(&mut cim, &gemm(&ai, &br, n, kk, m));
        add_into(&mut eim, &gemm(&aai, &abr, n, kk, m));
    }

    // radius propagation
    let mut rre = vec![0.0; n * m];
    let mut rim = vec![0.0; n * m];
    if b_has_rad {
        add_into(&mut rre, &gemm(&aar, &rbr, n, kk, m));
        add_into(&mut rre, &gemm(&aai, &rbi, n, kk, m));
        add_into(&mut rim, &gemm(&aar, &rbi, n, kk, m));
        add_into(&mut rim, &gemm(&aai, &rbr, n, kk, m));
    }
    if a_has_rad {
        let wbr: Vec<f64> = abr.iter().zip(&rbr).map(|(x, y)| x + y).collect();
        let wbi: Vec<f64> = abi.iter().zip(&rbi).map(|(x, y)| x + y).collect();
        add_into(&mut rre, &gemm(&rar, &wbr, n, kk, m));
        add_into(&mut rre, &gemm(&rai, &wbi, n, kk, m));
        add_into(&mut rim, &gemm(&rar, &wbi, n, kk, m));
        add_into(&mut rim, &gemm(&rai, &wbr, n, kk, m));
    }

    // every computed nonnegative sum has ≤ 4kk+8 rounded terms
    let u = f64::EPSILON / 2.0;
    let nt = (4 * kk + 8) as f64;
    let g = nt * u / (1.0 - nt * u);
    let scale = 1.0 + 4.0 * g;
    let tiny = nt * 5e-324 * 8.0;
    let mut data = Vec::with_capacity(n * m);
    for idx in 0..n * m {
        let r1 = ((rre[idx] + g * ere[idx]) * scale + tiny) * (1.0 + 4.0 * u);
        let r2 = ((rim[idx] + g * eim[idx]) * scale + tiny) * (1.0 + 4.0 * u);
        data.push(ComplexBall::new(
            Ball::new(cre[idx], Mag::from_f64(r1)),
            Ball::new(cim[idx], Mag::from_f64(r2)),
        ));
    }
    BallMatrix {
        rows: n,
        cols: m,
        data,
    }
}
