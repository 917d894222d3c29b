//! Training-speed evaluation of the recurrent network.
//!
//! Every step starts from `|ψ(x)><ψ(x)|` on the freshly reset register and a
//! carried state `σ` on the other register, then applies the fixed ansatz
//! unitary `A` and discards one register. With `B = A (|ψ(x)> ⊗ I)` the step
//! is the channel `σ ↦ tr_discard(B σ B†)`, and the readout is
//! `Σ_{i: readout bit set} (B σ B†)_ii`. `B` depends only on the parameters
//! and the encoded angle, so it is computed once per distinct angle and the
//! per-step work shrinks from the full `4^n` density matrix to products with
//! `2^n x 2^c` matrices. Results agree with [`super::DenseQrnn`] to rounding.

use std::collections::HashMap;

use super::block::ForwardTrace;
use super::config::{role_schedule, Architecture, ModelConfig};
use crate::circuit::{build_ansatz, ParameterVector};
use crate::error::{Error, Result};
use crate::sim::{kernel, Complex64, SquareMatrix};

/// Index tables for one step shape (plain has one, staggered has two).
#[derive(Debug, Clone)]
struct StepLayout {
    fresh_width: usize,
    cdim: usize,
    kdim: usize,
    /// `col[b * cdim + m]`: full index of fresh bits `b`, carried bits `m`.
    col: Vec<usize>,
    /// `rows[t * kdim + k]`: full index of discarded bits `t`, kept bits `k`.
    rows: Vec<usize>,
    readout_rows: Vec<usize>,
}

impl StepLayout {
    fn new(n: usize, fresh: &[usize], carried: &[usize], discard: &[usize], readout: usize) -> Self {
        let kept: Vec<usize> = (0..n).filter(|q| !discard.contains(q)).collect();
        let fresh_idx = kernel::deposit_table(fresh);
        let carried_idx = kernel::deposit_table(carried);
        let kept_idx = kernel::deposit_table(&kept);
        let disc_idx = kernel::deposit_table(discard);
        let col = fresh_idx
            .iter()
            .flat_map(|&b| carried_idx.iter().map(move |&m| b | m))
            .collect();
        let rows = disc_idx
            .iter()
            .flat_map(|&t| kept_idx.iter().map(move |&k| t | k))
            .collect();
        let readout_rows = (0..1usize << n).filter(|i| (i >> readout) & 1 == 1).collect();
        Self {
            fresh_width: fresh.len(),
            cdim: carried_idx.len(),
            kdim: kept_idx.len(),
            col,
            rows,
            readout_rows,
        }
    }
}

/// Distinct encoded angles of a batch and each window as indices into them.
#[derive(Debug, Clone)]
pub struct PreparedBatch {
    angles: Vec<f64>,
    windows: Vec<Vec<usize>>,
    /// `used[parity][angle]` for staggered models.
    used: [Vec<bool>; 2],
}

impl PreparedBatch {
    pub fn new(inputs: &[Vec<f64>]) -> Result<Self> {
        let mut lookup: HashMap<u64, usize> = HashMap::new();
        let mut angles = Vec::new();
        let mut windows = Vec::with_capacity(inputs.len());
        for w in inputs {
            if w.is_empty() {
                return Err(Error::Empty("window"));
            }
            let idx: Vec<usize> = w
                .iter()
                .map(|&x| {
                    *lookup.entry(x.to_bits()).or_insert_with(|| {
                        angles.push(x);
                        angles.len() - 1
                    })
                })
                .collect();
            windows.push(idx);
        }
        let mut used = [vec![false; angles.len()], vec![false; angles.len()]];
        for w in &windows {
            for (t, &a) in w.iter().enumerate() {
                used[t % 2][a] = true;
            }
        }
        Ok(Self {
            angles,
            windows,
            used,
        })
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn window_len(&self, sample: usize) -> usize {
        self.windows[sample].len()
    }

    pub fn distinct_angles(&self) -> usize {
        self.angles.len()
    }
}

/// Complex matrix stored as separate real and imaginary planes, so the
/// inner loops vectorize.
#[derive(Debug, Clone, Default)]
struct Planes {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Planes {
    fn zeros(len: usize) -> Self {
        Self {
            re: vec![0.0; len],
            im: vec![0.0; len],
        }
    }

    fn reset(&mut self, len: usize) {
        self.re.clear();
        self.re.resize(len, 0.0);
        self.im.clear();
        self.im.resize(len, 0.0);
    }
}

/// `Σ_n a_n conj(b_n)` over equal-length row slices.
#[inline(always)]
fn dot_conj(ar: &[f64], ai: &[f64], br: &[f64], bi: &[f64]) -> (f64, f64) {
    // independent partial sums let the compiler use vector lanes
    let mut re = [0.0; 4];
    let mut im = [0.0; 4];
    let n4 = ar.len() / 4 * 4;
    for c in (0..n4).step_by(4) {
        for l in 0..4 {
            let (xr, xi, yr, yi) = (ar[c + l], ai[c + l], br[c + l], bi[c + l]);
            re[l] += xr * yr + xi * yi;
            im[l] += xi * yr - xr * yi;
        }
    }
    for c in n4..ar.len() {
        re[0] += ar[c] * br[c] + ai[c] * bi[c];
        im[0] += ai[c] * br[c] - ar[c] * bi[c];
    }
    (re[0] + re[1] + re[2] + re[3], im[0] + im[1] + im[2] + im[3])
}

/// Row `i` of `C = B σ`.
#[inline(always)]
fn row_product(cd: usize, i: usize, b: &Planes, rho: &Planes, c: &mut Planes) {
    let (cre, cim) = (&mut c.re[i * cd..(i + 1) * cd], &mut c.im[i * cd..(i + 1) * cd]);
    for m in 0..cd {
        let (br, bi) = (b.re[i * cd + m], b.im[i * cd + m]);
        if br == 0.0 && bi == 0.0 {
            continue;
        }
        let (sr, si) = (&rho.re[m * cd..(m + 1) * cd], &rho.im[m * cd..(m + 1) * cd]);
        for (((cr, ci), &xr), &xi) in cre.iter_mut().zip(cim.iter_mut()).zip(sr).zip(si) {
            *cr += br * xr - bi * xi;
            *ci += br * xi + bi * xr;
        }
    }
}

/// `Σ_n c_in conj(b_jn)`.
#[inline(always)]
fn row_dot(cd: usize, c: &Planes, i: usize, b: &Planes, j: usize) -> (f64, f64) {
    dot_conj(
        &c.re[i * cd..(i + 1) * cd],
        &c.im[i * cd..(i + 1) * cd],
        &b.re[j * cd..(j + 1) * cd],
        &b.im[j * cd..(j + 1) * cd],
    )
}

/// `B` matrices for every (layout, angle) pair a batch needs.
pub struct StepMaps {
    maps: Vec<Vec<Planes>>,
}

/// Recurrent network with the ansatz folded into one dense unitary.
#[derive(Debug, Clone)]
pub struct CompiledQrnn {
    config: ModelConfig,
    ndim: usize,
    layouts: Vec<StepLayout>,
    /// `gathered[layout][b]`: the `nd x cdim` block of `A` whose columns
    /// have fresh bits `b`.
    gathered: Vec<Vec<Planes>>,
}

impl CompiledQrnn {
    pub fn new(config: ModelConfig, params: &ParameterVector) -> Result<Self> {
        let u = build_ansatz(&config.ansatz, params)?.unitary();
        Ok(Self::from_unitary(config, &u))
    }

    /// Use `u` as the per-step ansatz unitary.
    pub fn from_unitary(config: ModelConfig, u: &SquareMatrix) -> Self {
        let n = config.n_qubits();
        assert_eq!(u.dim(), 1 << n, "ansatz unitary has the wrong size");
        let layouts = match config.kind {
            Architecture::Plain => {
                let r = role_schedule(&config, 0);
                vec![StepLayout::new(n, &r.data, &r.history, &r.data, r.readout)]
            }
            Architecture::Staggered => (0..2)
                .map(|t| {
                    let r = role_schedule(&config, t);
                    StepLayout::new(n, &r.data, &r.history, &r.history, r.readout)
                })
                .collect(),
        };
        let nd = 1usize << n;
        let a = u.as_slice();
        let gathered = layouts
            .iter()
            .map(|lay| {
                let cd = lay.cdim;
                (0..1usize << lay.fresh_width)
                    .map(|b| {
                        let cols = &lay.col[b * cd..(b + 1) * cd];
                        let mut g = Planes::zeros(nd * cd);
                        for i in 0..nd {
                            for (m, &ci) in cols.iter().enumerate() {
                                let z: Complex64 = a[i * nd + ci];
                                g.re[i * cd + m] = z.re;
                                g.im[i * cd + m] = z.im;
                            }
                        }
                        g
                    })
                    .collect()
            })
            .collect();
        Self {
            config,
            ndim: nd,
            layouts,
            gathered,
        }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    fn layout_for(&self, step: usize) -> usize {
        step % self.layouts.len()
    }

    fn initial_carried(&self) -> Planes {
        let cd = self.layouts[0].cdim;
        let mut rho = Planes::zeros(cd * cd);
        rho.re[0] = 1.0;
        rho
    }

    /// `B = A (|ψ(x)> ⊗ I_carried)` for layout `li`.
    fn step_map(&self, li: usize, angle: f64) -> Planes {
        let lay = &self.layouts[li];
        let (s, c) = (angle / 2.0).sin_cos();
        let psi: Vec<f64> = (0..1usize << lay.fresh_width)
            .map(|b| {
                let ones = b.count_ones() as i32;
                s.powi(ones) * c.powi(lay.fresh_width as i32 - ones)
            })
            .collect();
        let mut out = Planes::zeros(self.ndim * lay.cdim);
        for (g, &amp) in self.gathered[li].iter().zip(&psi) {
            if amp == 0.0 {
                continue;
            }
            for (o, x) in out.re.iter_mut().zip(&g.re) {
                *o += amp * x;
            }
            for (o, x) in out.im.iter_mut().zip(&g.im) {
                *o += amp * x;
            }
        }
        out
    }

    pub fn step_maps(&self, batch: &PreparedBatch) -> StepMaps {
        let maps = (0..self.layouts.len())
            .map(|li| {
                batch
                    .angles
                    .iter()
                    .enumerate()
                    .map(|(a, &x)| {
                        let needed = match self.layouts.len() {
                            1 => true,
                            _ => batch.used[li][a],
                        };
                        if needed {
                            self.step_map(li, x)
                        } else {
                            Planes::default()
                        }
                    })
                    .collect()
            })
            .collect();
        StepMaps { maps }
    }

    /// Apply one step; returns the readout probability and, if requested,
    /// the carried state for the next step.
    fn apply_step(&self, li: usize, b: &Planes, rho: &Planes, want_next: bool, scratch: &mut Planes) -> (f64, Planes) {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("avx2") {
                // SAFETY: the feature was detected at runtime
                return unsafe { self.apply_step_avx2(li, b, rho, want_next, scratch) };
            }
        }
        self.apply_step_generic(li, b, rho, want_next, scratch)
    }

    /// Same arithmetic in the same order, compiled for wider vector lanes.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn apply_step_avx2(
        &self,
        li: usize,
        b: &Planes,
        rho: &Planes,
        want_next: bool,
        scratch: &mut Planes,
    ) -> (f64, Planes) {
        self.apply_step_generic(li, b, rho, want_next, scratch)
    }

    #[inline(always)]
    fn apply_step_generic(&self, li: usize, b: &Planes, rho: &Planes, want_next: bool, scratch: &mut Planes) -> (f64, Planes) {
        let lay = &self.layouts[li];
        let cd = lay.cdim;
        let nd = self.ndim;
        scratch.reset(nd * cd);
        // C = B σ, only on the readout rows when this is the last step
        if want_next {
            for i in 0..nd {
                row_product(cd, i, b, rho, scratch);
            }
        } else {
            for &i in &lay.readout_rows {
                row_product(cd, i, b, rho, scratch);
            }
        }
        let c = &*scratch;
        let mut p = 0.0;
        for &i in &lay.readout_rows {
            p += row_dot(cd, c, i, b, i).0;
        }
        if !want_next {
            return (p, Planes::default());
        }
        let kd = lay.kdim;
        let td = lay.rows.len() / kd;
        let mut next = Planes::zeros(kd * kd);
        for k in 0..kd {
            for l in k..kd {
                let (mut ar, mut ai) = (0.0, 0.0);
                for t in 0..td {
                    let (r, i) = row_dot(cd, c, lay.rows[t * kd + k], b, lay.rows[t * kd + l]);
                    ar += r;
                    ai += i;
                }
                next.re[k * kd + l] = ar;
                if k == l {
                    next.im[k * kd + k] = 0.0;
                } else {
                    next.im[k * kd + l] = ai;
                    next.re[l * kd + k] = ar;
                    next.im[l * kd + k] = -ai;
                }
            }
        }
        (p, next)
    }

    /// Readout probability of every step for one window.
    pub fn trace(&self, window_angles: &[f64]) -> Result<ForwardTrace> {
        if window_angles.is_empty() {
            return Err(Error::Empty("window"));
        }
        let mut rho = self.initial_carried();
        let mut scratch = Planes::default();
        let mut probs = Vec::with_capacity(window_angles.len());
        for (t, &x) in window_angles.iter().enumerate() {
            let li = self.layout_for(t);
            let b = self.step_map(li, x);
            let last = t + 1 == window_angles.len();
            let (p, next) = self.apply_step(li, &b, &rho, !last, &mut scratch);
            probs.push(p);
            rho = next;
        }
        Ok(ForwardTrace::from_steps(probs))
    }

    /// Final-step readout for every window of `batch`.
    pub fn final_probs(&self, batch: &PreparedBatch) -> Vec<f64> {
        let maps = self.step_maps(batch);
        let mut scratch = Planes::default();
        batch
            .windows
            .iter()
            .map(|w| self.run_window(w, &maps, &mut scratch))
            .collect()
    }

    fn run_window(&self, w: &[usize], maps: &StepMaps, scratch: &mut Planes) -> f64 {
        let rho = self.initial_carried();
        self.run_from(rho, 0, w, maps, None, scratch)
    }

    /// Continue from carried state `rho` at step `start`. If `first_map` is
    /// given it replaces the map of step `start`.
    fn run_from(
        &self,
        mut rho: Planes,
        start: usize,
        w: &[usize],
        maps: &StepMaps,
        first_map: Option<&Planes>,
        scratch: &mut Planes,
    ) -> f64 {
        let mut p = 0.0;
        for t in start..w.len() {
            let li = self.layout_for(t);
            let b: &Planes = match (t == start, first_map) {
                (true, Some(m)) => m,
                _ => &maps.maps[li][w[t]],
            };
            let last = t + 1 == w.len();
            let (pt, next) = self.apply_step(li, b, &rho, !last, scratch);
            p = pt;
            rho = next;
        }
        p
    }

    /// Carried states entering each step of window `w` (length `T`).
    fn carried_states(&self, w: &[usize], maps: &StepMaps, scratch: &mut Planes) -> Vec<Planes> {
        let mut states = Vec::with_capacity(w.len());
        let mut rho = self.initial_carried();
        for t in 0..w.len() {
            states.push(rho.clone());
            if t + 1 < w.len() {
                let li = self.layout_for(t);
                rho = self.apply_step(li, &maps.maps[li][w[t]], &rho, true, scratch).1;
            }
        }
        states
    }
}

/// Cached unshifted evaluation of a batch: step maps and the carried state
/// entering every step of every window.
pub struct BaseRun {
    maps: StepMaps,
    states: Vec<Vec<Planes>>,
}

impl CompiledQrnn {
    pub fn base_run(&self, batch: &PreparedBatch) -> BaseRun {
        let maps = self.step_maps(batch);
        let mut scratch = Planes::default();
        let states = batch
            .windows
            .iter()
            .map(|w| self.carried_states(w, &maps, &mut scratch))
            .collect();
        BaseRun { maps, states }
    }

    /// Final-step readout of every window with the ansatz of step `t`
    /// replaced by `shifted`'s, for each `t`. Returns `out[sample][t]`.
    ///
    /// The parameter-shift gradient needs this because a shared parameter
    /// occurs once per step.
    pub fn occurrence_shifted_probs(
        &self,
        shifted: &CompiledQrnn,
        batch: &PreparedBatch,
        base: &BaseRun,
    ) -> Vec<Vec<f64>> {
        let shifted_maps = shifted.step_maps(batch);
        let mut scratch = Planes::default();
        batch
            .windows
            .iter()
            .zip(&base.states)
            .map(|(w, states)| {
                (0..w.len())
                    .map(|t| {
                        let li = self.layout_for(t);
                        let b = &shifted_maps.maps[li][w[t]];
                        self.run_from(states[t].clone(), t, w, &base.maps, Some(b), &mut scratch)
                    })
                    .collect()
            })
            .collect()
    }
}
