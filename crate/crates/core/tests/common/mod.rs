//! Independent reference computations used only by the tests. Nothing here
//! calls into the library's numerical routines.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// `J_nu(x)` for integer `nu` from the power series (fine for `|x| < 10`).
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for m in 1..200 {
        term *= -half * half / (m as f64 * (m + nu) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// First positive zero of `J_0` by Newton iteration on the series (`J_0' = -J_1`).
pub fn j01() -> f64 {
    let mut x: f64 = 2.4;
    for _ in 0..50 {
        let dx = bessel_j(0, x) / -bessel_j(1, x);
        x -= dx;
        if dx.abs() < 1e-16 {
            break;
        }
    }
    x
}

pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |a, i| a * (n - i) as f64 / (i + 1) as f64)
}

pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Chebyshev points `x_j = cos(j pi / N)` and the differentiation matrix on `[-1, 1]`.
fn cheb(n: usize) -> (Vec<f64>, DMatrix<f64>) {
    let x: Vec<f64> = (0..=n)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let c =
        |i: usize| (if i == 0 || i == n { 2.0 } else { 1.0 }) * if i & 1 == 0 { 1.0 } else { -1.0 };
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    (x, d)
}

/// Principal eigenvalue of the radial `k`-Hessian problem on `B_R` by
/// Chebyshev collocation in `s = (r / R)^2` with a damped Newton solve.
/// Unknowns are the nodal values of `phi` and `lambda`.
pub fn collocation_eigenvalue(n: usize, k: usize, radius: f64, nodes: usize) -> f64 {
    let (x, dx) = cheb(nodes);
    // s = (1 - x) / 2: node 0 is s = 0, node N is s = 1
    let s: Vec<f64> = x.iter().map(|x| (1.0 - x) / 2.0).collect();
    let d1 = &dx * -2.0;
    let d2 = &d1 * &d1;
    let m = nodes + 1;
    let r2 = radius * radius;
    let (a, b) = (binom(n - 1, k - 1), binom(n - 1, k));

    let residual = |u: &DVector<f64>| -> DVector<f64> {
        let phi = u.rows(0, m).into_owned();
        let lam = u[m];
        let ps = &d1 * &phi;
        let pss = &d2 * &phi;
        let mut f = DVector::zeros(m + 1);
        for i in 0..nodes {
            let q = 2.0 * ps[i] / r2;
            let dd = (2.0 * ps[i] + 4.0 * s[i] * pss[i]) / r2;
            f[i] = a * q.powi(k as i32 - 1) * dd + b * q.powi(k as i32)
                - lam * (-phi[i]).powi(k as i32);
        }
        f[nodes] = phi[nodes];
        f[m] = phi[0] + 1.0;
        f
    };

    // start from phi = s - 1 and the matching value at the center
    let mut u = DVector::zeros(m + 1);
    for i in 0..m {
        u[i] = s[i] - 1.0;
    }
    u[m] = binom(n, k) * (2.0 / r2).powi(k as i32);
    let mut f = residual(&u);
    for _ in 0..100 {
        let mut jac = DMatrix::zeros(m + 1, m + 1);
        for j in 0..=m {
            let step = 1e-7 * u[j].abs().max(1.0);
            let mut up = u.clone();
            up[j] += step;
            let col = (residual(&up) - &f) / step;
            jac.set_column(j, &col);
        }
        let delta = jac
            .lu()
            .solve(&(-&f))
            .expect("collocation Jacobian is singular");
        let mut t = 1.0;
        loop {
            let trial = &u + &delta * t;
            let ft = residual(&trial);
            if ft.norm() < f.norm() || t < 1e-4 {
                u = trial;
                f = ft;
                break;
            }
            t *= 0.5;
        }
        if delta.norm() < 1e-13 * u.norm() || f.norm() < 1e-13 {
            break;
        }
    }
    u[m]
}

/// Smallest eigenvalue of `-r^(1-n) (r^(n-1) u')' = lambda u` on `(0, R)`,
/// `u(R) = 0`, by a cell-centered finite-volume scheme and inverse iteration
/// with a tridiagonal solve, Richardson-extrapolated over `m` and `2m` cells.
pub fn radial_fd_laplacian(n: usize, radius: f64, m: usize) -> f64 {
    let single = |m: usize| {
        let dr = radius / m as f64;
        let w = |r: f64| r.powi(n as i32 - 1);
        let centers: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) * dr).collect();
        // symmetric form A u = lambda B u, B = diag(r_i^(n-1) dr)
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m];
        for i in 0..m {
            let right = w((i + 1) as f64 * dr) / dr;
            let left = w(i as f64 * dr) / dr;
            diag[i] = left + if i + 1 < m { right } else { 2.0 * right };
            if i + 1 < m {
                off[i] = -right;
            }
        }
        let bm: Vec<f64> = centers.iter().map(|&r| w(r) * dr).collect();
        // inverse iteration with Thomas algorithm on A
        let solve = |rhs: &[f64]| {
            let mut c = vec![0.0; m];
            let mut d = vec![0.0; m];
            c[0] = off[0] / diag[0];
            d[0] = rhs[0] / diag[0];
            for i in 1..m {
                let den = diag[i] - off[i - 1] * c[i - 1];
                c[i] = if i + 1 < m { off[i] / den } else { 0.0 };
                d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / den;
            }
            let mut x = vec![0.0; m];
            x[m - 1] = d[m - 1];
            for i in (0..m - 1).rev() {
                x[i] = d[i] - c[i] * x[i + 1];
            }
            x
        };
        let mut u = vec![1.0; m];
        let mut lam = 0.0;
        for _ in 0..500 {
            let rhs: Vec<f64> = u.iter().zip(&bm).map(|(a, b)| a * b).collect();
            let x = solve(&rhs);
            let num: f64 = u.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            let den: f64 = x.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            let new = num / den;
            let nx = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
            u = x.iter().map(|v| v / nx).collect();
            if (new - lam).abs() < 1e-15 * new {
                lam = new;
                break;
            }
            lam = new;
        }
        lam
    };
    let (a, b) = (single(m), single(2 * m));
    (4.0 * b - a) / 3.0
}

/// Tanh-sinh quadrature; robust for integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (c, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for i in -448i32..=448 {
        let t = i as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = u.tanh();
        let wgt = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if wgt < 1e-300 || (1.0 - x.abs()) == 0.0 {
            continue;
        }
        sum += wgt * f(c + half * x);
    }
    sum * h * half
}

/// Volume of the unit cube `[0, 1]^3` dilated by a ball of radius `rho`,
/// integrating the vertical extent over the plane.
pub fn cube_dilation_volume(rho: f64) -> f64 {
    let dist1 = |t: f64| {
        if t < 0.0 {
            -t
        } else if t > 1.0 {
            t - 1.0
        } else {
            0.0
        }
    };
    let column = |x: f64| -> f64 {
        let dx = dist1(x);
        if dx >= rho {
            return 0.0;
        }
        let reach = (rho * rho - dx * dx).sqrt();
        let height = |y: f64| {
            let dy = dist1(y);
            let d2 = dx * dx + dy * dy;
            1.0 + 2.0 * (rho * rho - d2).max(0.0).sqrt()
        };
        tanh_sinh(height, -reach, 0.0)
            + tanh_sinh(height, 0.0, 1.0)
            + tanh_sinh(height, 1.0, 1.0 + reach)
    };
    tanh_sinh(column, -rho, 0.0) + tanh_sinh(column, 0.0, 1.0) + tanh_sinh(column, 1.0, 1.0 + rho)
}

/// Area of the convex hull of a point set (monotone chain + shoelace).
pub fn hull_area(mut pts: Vec<[f64; 2]>) -> f64 {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let m = hull.len();
    (0..m)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

/// Area of `P + rho Q_N` with `Q_N` the regular `N`-gon inscribed in (or
/// circumscribing) the unit circle, from all pairwise vertex sums. The two
/// variants bracket the area of `P + rho B`.
pub fn polygon_dilation_area(
    vertices: &[[f64; 2]],
    rho: f64,
    sides: usize,
    circumscribed: bool,
) -> f64 {
    let rc = if circumscribed {
        rho / (std::f64::consts::PI / sides as f64).cos()
    } else {
        rho
    };
    let mut pts = Vec::with_capacity(vertices.len() * sides);
    for v in vertices {
        for j in 0..sides {
            let a = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / sides as f64;
            pts.push([v[0] + rc * a.cos(), v[1] + rc * a.sin()]);
        }
    }
    hull_area(pts)
}
