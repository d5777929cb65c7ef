//! Acceptance suite. Every criterion prints one `PASS` or `FAIL` line with the
//! measured residual, then asserts.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stratqed::green::{free_green_k, scattering_green, total_green_in, GreenOptions};
use stratqed::iorel::{energy_balance, find_surface_poles, noise_kernels, reflection_coeff};
use stratqed::numerics::{Complex3Tensor, Rect};
use stratqed::stack::{slab_rt_full, SlabRt};
use stratqed::{DispersionModel, Layer, LayerStack, ModeIndex, Polarization, Region, Units};
use stratqed_cli::commands::{spectrum, RunOptions};
use stratqed_cli::config::{Grid, StackConfig};
use stratqed_cli::RunConfig;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verdict(id: &str, name: &str, pass: bool, detail: String) {
    // written to the raw handle so the line survives libtest output capture
    let line = format!("{} criterion {id} ({name}): {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

/// Axial wavenumber with Im h >= 0 (ties: Re h >= 0), written out independently.
fn h_of(k2: Complex64, lambda: f64) -> Complex64 {
    let h = (k2 - lambda * lambda).sqrt();
    if h.im < 0.0 || (h.im == 0.0 && h.re < 0.0) {
        -h
    } else {
        h
    }
}

/// Interface coefficients a -> b with the transverse-electric-field amplitude convention for TM.
fn fresnel(pol: Polarization, ea: Complex64, eb: Complex64, ha: Complex64, hb: Complex64) -> (Complex64, Complex64) {
    match pol {
        Polarization::Te => ((ha - hb) / (ha + hb), 2.0 * ha / (ha + hb)),
        Polarization::Tm => {
            let den = eb * ha + ea * hb;
            ((eb * ha - ea * hb) / den, 2.0 * ha * ea.sqrt() * eb.sqrt() / den)
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn si_stack(left: Complex64, layers: &[(Complex64, f64)], right: Complex64) -> LayerStack {
    LayerStack::new(
        DispersionModel::constant(left),
        layers.iter().map(|&(e, d)| Layer { medium: DispersionModel::constant(e), thickness: d }).collect(),
        DispersionModel::constant(right),
    )
    .unwrap()
}

fn k0_si(omega: f64) -> f64 {
    Units::Si.k0(omega)
}

#[test]
fn criterion_01_fresnel_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for _ in 0..200 {
        let omega = 10f64.powf(rng.gen_range(14.0..16.0));
        let e1 = c(rng.gen_range(1.0..4.0), 0.0);
        let e2 = c(rng.gen_range(-10.0..10.0), rng.gen_range(0.0..5.0));
        let k0 = k0_si(omega);
        let lambda = rng.gen_range(0.0..3.0) * k0 * e1.re.sqrt();
        let s = si_stack(e1, &[], e2);
        let (h1, h2) = (h_of(e1 * k0 * k0, lambda), h_of(e2 * k0 * k0, lambda));
        for pol in Polarization::BOTH {
            let got = reflection_coeff(&s, &ModeIndex::new(omega, lambda, pol)).unwrap();
            let (want, _) = fresnel(pol, e1, e2, h1, h2);
            // near a Brewster zero the relative error is measured against 1e-3
            worst = worst.max((got - want).norm() / want.norm().max(1e-3));
            n += 1;
        }
    }
    verdict("1", "Fresnel limit", worst < 1e-12, format!("max relative error {worst:.2e} over {n} samples (tol 1e-12)"));
}

fn airy(pol: Polarization, e: [Complex64; 3], k0: f64, lambda: f64, d: f64) -> (Complex64, Complex64) {
    let h: Vec<Complex64> = e.iter().map(|&x| h_of(x * k0 * k0, lambda)).collect();
    let (r12, t12) = fresnel(pol, e[0], e[1], h[0], h[1]);
    let (r23, t23) = fresnel(pol, e[1], e[2], h[1], h[2]);
    let p = (Complex64::i() * h[1] * d).exp();
    let den = 1.0 + r12 * r23 * p * p;
    ((r12 + r23 * p * p) / den, t12 * t23 * p / den)
}

#[test]
fn criterion_02_airy_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for _ in 0..200 {
        let omega = 10f64.powf(rng.gen_range(14.0..16.0));
        let k0 = k0_si(omega);
        let e = [
            c(rng.gen_range(1.0..3.0), 0.0),
            c(rng.gen_range(-5.0..10.0), rng.gen_range(0.0..3.0)),
            c(rng.gen_range(1.0..4.0), rng.gen_range(0.0..1.0)),
        ];
        let d = rng.gen_range(0.02..3.0) / k0;
        let lambda = rng.gen_range(0.0..2.0) * k0 * e[0].re.sqrt();
        let s = si_stack(e[0], &[(e[1], d)], e[2]);
        for pol in Polarization::BOTH {
            let SlabRt { r, t, .. } = slab_rt_full(&s, &ModeIndex::new(omega, lambda, pol)).unwrap();
            let (rw, tw) = airy(pol, e, k0, lambda, d);
            worst = worst.max(rel(r, rw)).max(rel(t, tw));
            n += 1;
        }
    }
    verdict("2", "Airy limit", worst < 1e-10, format!("max relative error {worst:.2e} over {n} samples (tol 1e-10)"));
}

fn random_layers(rng: &mut ChaCha8Rng, k0: f64, loss: bool) -> Vec<(Complex64, f64)> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|_| {
            let im = if loss { rng.gen_range(0.001..3.0) } else { 0.0 };
            (c(rng.gen_range(1.0..12.0), im), rng.gen_range(0.05..5.0) / k0)
        })
        .collect()
}

#[test]
fn criterion_03_lossless_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut n) = (0.0f64, 0);
    for _ in 0..100 {
        let omega = 10f64.powf(rng.gen_range(14.0..16.0));
        let k0 = k0_si(omega);
        let (el, er) = (rng.gen_range(1.0..3.0), rng.gen_range(1.0..3.0));
        let s = si_stack(c(el, 0.0), &random_layers(&mut rng, k0, false), c(er, 0.0));
        for _ in 0..5 {
            let lambda = rng.gen_range(0.0..0.999) * k0 * el.min(er).sqrt();
            for pol in Polarization::BOTH {
                let rt = slab_rt_full(&s, &ModeIndex::new(omega, lambda, pol)).unwrap();
                let (hl, hr) = (h_of(c(el, 0.0) * k0 * k0, lambda).re, h_of(c(er, 0.0) * k0 * k0, lambda).re);
                worst = worst.max((rt.r.norm_sqr() + rt.t.norm_sqr() * hr / hl - 1.0).abs());
                n += 1;
            }
        }
    }
    verdict("3", "lossless unitarity", worst < 1e-10, format!("max | |r|^2 + T - 1 | = {worst:.2e} over {n} modes (tol 1e-10)"));
}

#[test]
fn criterion_04_absorption_noise_balance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut balance, mut noise, mut n) = (0.0f64, 0.0f64, 0);
    for _ in 0..50 {
        let omega = 10f64.powf(rng.gen_range(14.0..16.0));
        let k0 = k0_si(omega);
        let (el, er) = (rng.gen_range(1.0..3.0), rng.gen_range(1.0..3.0));
        let s = si_stack(c(el, 0.0), &random_layers(&mut rng, k0, true), c(er, 0.0));
        let lambda = rng.gen_range(0.0..0.999) * k0 * el.min(er).sqrt();
        for pol in Polarization::BOTH {
            let m = ModeIndex::new(omega, lambda, pol);
            let b = energy_balance(&s, &m).unwrap();
            let set = noise_kernels(&s, &m).unwrap();
            balance = balance.max(b.residual);
            noise = noise.max((set.strength_left.unwrap() - (1.0 - b.reflectance - b.transmittance)).abs());
            n += 1;
        }
    }
    let pass = balance < 1e-6 && noise < 1e-6;
    verdict(
        "4",
        "absorption/noise balance",
        pass,
        format!("max balance residual {balance:.2e}, max |noise - (1-|r|^2-T)| {noise:.2e} over {n} modes (tol 1e-6)"),
    )
}

fn coating() -> LayerStack {
    si_stack(c(1.0, 0.0), &[(c(2.5, 0.3), 1.0e-7), (c(-1.5, 0.8), 4.0e-8)], c(1.8, 0.0))
}

const OMEGA: f64 = 3.0e15;

fn coating_opts(s: &LayerStack) -> GreenOptions {
    let mut o = GreenOptions::for_stack(s, OMEGA).unwrap();
    o.quad.rel_tol = 1e-10;
    o
}

fn random_point(rng: &mut ChaCha8Rng, s: &LayerStack, region: Region) -> [f64; 3] {
    let (lo, hi) = s.region_bounds(region).unwrap();
    let lo = if lo.is_finite() { lo } else { hi - 2.0e-7 };
    let hi = if hi.is_finite() { hi } else { lo + 2.0e-7 };
    let pad = 0.05 * (hi - lo);
    [rng.gen_range(-1e-7..1e-7), rng.gen_range(-1e-7..1e-7), rng.gen_range(lo + pad..hi - pad)]
}

fn tensor_rel(a: &Complex3Tensor, b: &Complex3Tensor) -> f64 {
    (*a - *b).max_abs() / a.max_abs().max(b.max_abs())
}

#[test]
fn criterion_05_green_reciprocity() {
    let s = coating();
    let o = coating_opts(&s);
    let regions = s.regions();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let i = rng.gen_range(0..regions.len());
        let j = (i + rng.gen_range(1..regions.len())) % regions.len();
        let (f, src) = (regions[i], regions[j]);
        let (r, p) = (random_point(&mut rng, &s, f), random_point(&mut rng, &s, src));
        let g = total_green_in(&s, OMEGA, f, src, r, p, &o).unwrap();
        let back = total_green_in(&s, OMEGA, src, f, p, r, &o).unwrap();
        worst = worst.max(tensor_rel(&g.value, &back.value.transpose()));
    }
    verdict("5", "Green-tensor reciprocity", worst < 1e-6, format!("max relative asymmetry {worst:.2e} over 20 cross-region pairs (tol 1e-6)"));
}

#[test]
fn criterion_06_tangential_continuity() {
    let s = coating();
    let o = coating_opts(&s);
    let regions = s.regions();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let src = regions[rng.gen_range(0..regions.len())];
        let p = random_point(&mut rng, &s, src);
        let (x, y) = (rng.gen_range(-2e-7..2e-7), rng.gen_range(-2e-7..2e-7));
        for (i, &z) in s.interfaces().iter().enumerate() {
            let r = [x, y, z];
            let below = total_green_in(&s, OMEGA, regions[i], src, r, p, &o).unwrap().value;
            let above = total_green_in(&s, OMEGA, regions[i + 1], src, r, p, &o).unwrap().value;
            let scale = below.max_abs().max(above.max_abs());
            for row in 0..2 {
                for col in 0..3 {
                    worst = worst.max((below.get(row, col) - above.get(row, col)).norm() / scale);
                }
            }
        }
    }
    verdict("6", "tangential continuity", worst < 1e-6, format!("max relative jump {worst:.2e} at 10 offsets x 3 interfaces (tol 1e-6)"));
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Azimuthal average of `R X R^T` over rotations about z.
fn phi_average(x: &Complex3Tensor) -> Complex3Tensor {
    let g = |i, j| x.get(i, j);
    let zero = c(0.0, 0.0);
    let d = (g(0, 0) + g(1, 1)) * 0.5;
    let a = (g(0, 1) - g(1, 0)) * 0.5;
    Complex3Tensor([[d, a, zero], [-a, d, zero], [zero, zero, g(2, 2)]])
}

#[test]
fn criterion_07_fluctuation_dissipation() {
    // every region absorbs; the field point sits in the middle of the slab
    let eps = [c(2.0, 0.3), c(4.0, 0.4), c(1.5, 0.25)];
    let s = LayerStack::new(
        DispersionModel::constant(eps[0]),
        vec![Layer { medium: DispersionModel::constant(eps[1]), thickness: 1.0 }],
        DispersionModel::constant(eps[2]),
    )
    .unwrap()
    .with_units(Units::Natural);
    let omega = 1.0;
    let k_f = eps[1].sqrt();
    let r = [0.0, 0.0, 0.0];
    let mut o = GreenOptions::for_stack(&s, omega).unwrap();
    o.quad.rel_tol = 1e-5;
    o.quad.abs_tol = 1e-8;
    o.quad.lambda_max = 3.0 * o.quad.lambda_max / 20.0;
    let r_max = 20.0 * 2.0 * std::f64::consts::PI;
    let start = Instant::now();

    // ball of radius r_max around r in spherical coordinates; the phi integral is analytic
    let z_if = s.interfaces();
    let mut radial = Vec::new();
    let mut edges = vec![0.0];
    let mut x = 0.0;
    while x < r_max {
        let step = if x < 2.0 {
            0.25
        } else if x < 10.0 {
            0.5
        } else if x < 30.0 {
            1.0
        } else {
            5.0
        };
        x = (x + step).min(r_max);
        edges.push(x);
    }
    let gl_r = gauss_legendre(6);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        for &(t, wt) in &gl_r {
            radial.push((0.5 * (a + b) + 0.5 * (b - a) * t, 0.5 * (b - a) * wt));
        }
    }
    let gl_t = gauss_legendre(12);
    let shell = |big_r: f64| -> Complex3Tensor {
        // split cos(theta) where the sphere crosses an interface
        let mut cuts = vec![-1.0];
        for &z in &z_if {
            let u = (z - r[2]) / big_r;
            if u > -1.0 && u < 1.0 {
                cuts.push(u);
            }
        }
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        let mut acc = Complex3Tensor::zero();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            for &(t, wt) in &gl_t {
                let u = 0.5 * (a + b) + 0.5 * (b - a) * t;
                let weight = 0.5 * (b - a) * wt;
                let sp = [big_r * (1.0 - u * u).max(0.0).sqrt(), 0.0, r[2] + big_r * u];
                let region = s.region_of(sp[2]);
                let eps_s = eps[s.region_index(region).unwrap()];
                let g0 = free_green_k(k_f, r, sp).unwrap();
                let gs = scattering_green(&s, omega, Region::Layer(0), region, r, sp, &o).unwrap().value;
                let term = if region == Region::Layer(0) {
                    // G G^+ - G0 G0^+ without the singular G0 G0^+ piece
                    (g0.matmul(&gs.adjoint()) + gs.matmul(&g0.adjoint()) + gs.matmul(&gs.adjoint())) * eps_s.im
                } else {
                    gs.matmul(&gs.adjoint()) * eps_s.im - g0.matmul(&g0.adjoint()) * eps[1].im
                };
                acc += phi_average(&term) * weight;
            }
        }
        acc
    };
    let parts: Vec<Complex3Tensor> = radial.par_iter().map(|&(big_r, w)| shell(big_r) * (w * big_r * big_r)).collect();
    let mut lhs = Complex3Tensor::zero();
    for p in parts {
        lhs += p;
    }
    lhs = lhs * (2.0 * std::f64::consts::PI * omega * omega);
    let gs_rr = scattering_green(&s, omega, Region::Layer(0), Region::Layer(0), r, r, &o).unwrap().value;
    // the spherical exclusion around r pairs with the depolarization term -I delta / (3 k^2)
    // that the closed-form free tensor leaves out; it survives in the cross terms with G_s
    let depol = Complex64::new(-1.0, 0.0) / (3.0 * k_f * k_f);
    lhs += (gs_rr.adjoint() * depol + gs_rr * depol.conj()) * (omega * omega * eps[1].im);
    let rhs = gs_rr.hermitian_imag();
    let err = (lhs - rhs).max_abs() / rhs.max_abs();
    let secs = start.elapsed().as_secs_f64();
    let pass = err <= 1e-2 && secs <= 300.0;
    verdict(
        "7",
        "fluctuation-dissipation",
        pass,
        format!(
            "relative residual {err:.2e} (tol 1e-2), radius {r_max:.1}, {} radial x <=36 angular nodes, {secs:.0} s (budget 300 s)",
            radial.len()
        ),
    );
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(a) * f(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn criterion_08_surface_poles() {
    let eps = c(-2.0, 0.01);
    let s = LayerStack::half_spaces(DispersionModel::vacuum(), DispersionModel::constant(eps)).with_units(Units::Natural);
    let expect = (eps / (eps + 1.0)).sqrt();
    let window = Rect { re_min: 1.1, re_max: 2.0, im_min: -0.3, im_max: 0.3 };
    let found = find_surface_poles(&s, 1.0, Polarization::Tm, window, 1e-14).unwrap();
    let spp_err = if found.poles.len() == 1 { rel(found.poles[0].lambda, expect) } else { f64::INFINITY };

    // TE guided modes of a symmetric slab eps = 2.25 thicker than the vacuum wavelength
    let d = 1.5 * 2.0 * std::f64::consts::PI;
    let n2 = 2.25f64;
    let slab = LayerStack::slab(DispersionModel::vacuum(), DispersionModel::real(n2), d).unwrap().with_units(Units::Natural);
    let relation = |l: f64, odd: bool| {
        let (h, kappa) = ((n2 - l * l).sqrt(), (l * l - 1.0).sqrt());
        let (sn, cs) = (h * d / 2.0).sin_cos();
        if odd {
            kappa * sn + h * cs
        } else {
            kappa * cs - h * sn
        }
    };
    let mut oracle = Vec::new();
    let grid: Vec<f64> = (0..=20_000).map(|i| 1.0 + 1e-9 + (0.5 - 2e-9) * i as f64 / 20_000.0).collect();
    for odd in [false, true] {
        for w in grid.windows(2) {
            if relation(w[0], odd) * relation(w[1], odd) <= 0.0 {
                oracle.push(bisect(|l| relation(l, odd), w[0], w[1]));
            }
        }
    }
    oracle.sort_by(f64::total_cmp);
    let window = Rect { re_min: 1.0 + 1e-7, re_max: 1.5 - 1e-7, im_min: -0.05, im_max: 0.05 };
    let guided = find_surface_poles(&slab, 1.0, Polarization::Te, window, 1e-15).unwrap();
    let guide_err = if guided.poles.len() == oracle.len() && !oracle.is_empty() {
        guided.poles.iter().zip(&oracle).map(|(p, o)| (p.lambda - o).norm()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let pass = spp_err < 1e-6 && guide_err < 1e-9;
    verdict(
        "8",
        "surface-pole accuracy",
        pass,
        format!(
            "plasmon relative error {spp_err:.2e} (tol 1e-6); {} guided modes, max error {guide_err:.2e} (tol 1e-9)",
            oracle.len()
        ),
    );
}

fn coating_config(n_omega: usize, n_lambda: usize) -> RunConfig {
    let medium = |re: f64, im: f64| DispersionModel::constant(c(re, im));
    RunConfig {
        units: Units::Si,
        stack: StackConfig {
            left: medium(1.0, 0.0),
            layers: vec![
                Layer { medium: medium(2.13, 0.0), thickness: 1.0e-7 },
                Layer {
                    medium: DispersionModel::drude_lorentz(
                        9.5,
                        vec![stratqed::Oscillator { omega_p: 1.36e16, omega_0: 0.0, gamma: 1.05e14 }],
                    ),
                    thickness: 2.0e-8,
                },
                Layer { medium: medium(6.0, 0.05), thickness: 8.0e-8 },
            ],
            right: medium(2.25, 0.0),
        },
        omega: Grid::Linspace { start: 1.5e15, stop: 3.5e15, num: n_omega },
        lambda: Some(Grid::Linspace { start: 0.0, stop: 2.0e7, num: n_lambda }),
        angle_deg: None,
        exterior_index: None,
        polarizations: Polarization::BOTH.to_vec(),
        n_max: 60,
        quadrature: None,
        format: Default::default(),
        green: None,
        poles: None,
        check: Default::default(),
    }
}

#[test]
fn criterion_09_structure() {
    let table = spectrum(&coating_config(20, 20), &RunOptions::default()).unwrap();
    let cross = table.column("cross").unwrap();
    let status = table.column("status").unwrap();
    let mut worst_cross: f64 = 0.0;
    let mut computed = 0;
    for row in &table.rows {
        if row[status].as_str() == Some("ok") {
            worst_cross = worst_cross.max(row[cross].as_f64().unwrap());
            computed += 1;
        }
    }

    // splitting a layer into two identical halves changes nothing
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_merge: f64 = 0.0;
    for _ in 0..100 {
        let omega = 10f64.powf(rng.gen_range(14.0..16.0));
        let k0 = k0_si(omega);
        let lossy = rng.gen_bool(0.5);
        let layers = random_layers(&mut rng, k0, lossy);
        let i = rng.gen_range(0..layers.len());
        let split = rng.gen_range(0.1..0.9);
        let mut halves = layers.clone();
        let (e, d) = layers[i];
        halves.splice(i..=i, [(e, d * split), (e, d * (1.0 - split))]);
        let a = si_stack(c(1.0, 0.0), &layers, c(2.0, 0.0));
        let b = si_stack(c(1.0, 0.0), &halves, c(2.0, 0.0));
        let lambda = rng.gen_range(0.0..3.0) * k0;
        for pol in Polarization::BOTH {
            let m = ModeIndex::new(omega, lambda, pol);
            let (x, y) = (slab_rt_full(&a, &m).unwrap(), slab_rt_full(&b, &m).unwrap());
            for (p, q) in [(x.r, y.r), (x.t, y.t), (x.r_rev, y.r_rev), (x.t_rev, y.t_rev)] {
                worst_merge = worst_merge.max((p - q).norm() / p.norm().max(1.0));
            }
        }
    }
    let pass = worst_cross == 0.0 && computed == table.rows.len() && worst_merge < 1e-12;
    verdict(
        "9",
        "structural",
        pass,
        format!(
            "max off-diagonal polarization entry {worst_cross:e} over {computed}/{} rows; merge invariance {worst_merge:.2e} (tol 1e-12)",
            table.rows.len()
        ),
    );
}

fn timed_spectrum(cfg: &RunConfig, jobs: usize) -> f64 {
    let start = Instant::now();
    let table = spectrum(cfg, &RunOptions { jobs, ..Default::default() }).unwrap();
    assert_eq!(table.rows.len(), 100 * 100 * 2);
    start.elapsed().as_secs_f64()
}

#[test]
fn criterion_10a_single_thread_runtime() {
    let cfg = coating_config(100, 100);
    let secs = timed_spectrum(&cfg, 1);
    verdict("10a", "spectrum runtime", secs < 10.0, format!("100x100 grid, 3-layer stack, 1 job: {secs:.2} s (limit 10 s)"));
}

#[test]
fn criterion_10b_parallel_scaling() {
    let cfg = coating_config(100, 100);
    let t1 = timed_spectrum(&cfg, 1);
    let t8 = timed_spectrum(&cfg, 8);
    let speedup = t1 / t8;
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    verdict(
        "10b",
        "parallel scaling",
        speedup >= 4.0,
        format!("1 job {t1:.2} s, 8 jobs {t8:.2} s, speedup {speedup:.2} (need >= 4) on {cores} available core(s)"),
    );
}
