//! The coarse-fine workflow over the certificate store.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use ball_core::{BallComplex, BallReal};
use certify_engine::{certify_window, propagate_bounds, OperatorContext};
use gkw_model::{assemble_matrix, GKWMatrix};
use spectral_expansion::ExpansionCertificate;

use crate::config::PipelineConfig;
use crate::record::Record;
use crate::store::{CertKey, CertificateStore, Stored};
use crate::PipelineError;

/// Largest `n` in the stored expansion error table.
pub const EXPANSION_TABLE_N: u64 = 10;

/// What a window stage certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Circle around the `j`-th candidate.
    Eigenvalue(usize),
    /// Circle between candidates `j` and `j + 1`.
    Gap(usize),
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Eigenvalue(j) => format!("{j}"),
            Target::Gap(j) => format!("gap{j}"),
        }
    }
}

/// One step of the run, cached or computed.
#[derive(Clone, Debug)]
pub struct Attempt {
    pub stage: String,
    pub k: usize,
    pub prec: u32,
    pub m: usize,
    pub cached: bool,
    pub outcome: Result<(), String>,
}

#[derive(Clone, Debug)]
pub struct WindowRow {
    pub target: Target,
    pub k: usize,
    pub prec: u32,
    pub m: usize,
    pub multiplicity: usize,
    pub lambda: Option<BallComplex>,
    pub rho: BallReal,
    pub alpha: BallReal,
    pub theta: BallReal,
    pub m_inf: BallReal,
    pub m_lk: BallReal,
    pub eps_k: BallReal,
    pub digest: String,
}

impl WindowRow {
    fn from_record(
        target: Target,
        prec: u32,
        m: usize,
        digest: String,
        r: &Record,
    ) -> Result<Self, PipelineError> {
        Ok(WindowRow {
            target,
            k: r.parse_value("K")?,
            prec,
            m,
            multiplicity: r.parse_value("multiplicity")?,
            lambda: r.complex("lambda", prec)?,
            rho: r.ball("rho", prec)?,
            alpha: r.ball("alpha", prec)?,
            theta: r.ball("theta", prec)?,
            m_inf: r.ball("M_inf", prec)?,
            m_lk: r.ball("M_LK", prec)?,
            eps_k: r.ball("eps_K", prec)?,
            digest,
        })
    }

    /// Largest of the real and imaginary radii of `λ`.
    pub fn radius(&self) -> Option<f64> {
        self.lambda
            .as_ref()
            .map(|l| l.re.rad().max(l.im.rad()).to_f64_up())
    }
}

#[derive(Clone, Debug)]
pub struct FineRow {
    pub target: Target,
    pub k_fine: usize,
    pub eps_fine: BallReal,
    pub m_operator: BallReal,
    pub m_fine: BallReal,
    pub alpha_fine: BallReal,
    pub theta_fine: BallReal,
}

#[derive(Clone, Debug)]
pub struct ExpansionRow {
    pub k: usize,
    pub n_modes: usize,
    pub lambdas: Vec<BallComplex>,
    pub coeffs: Vec<BallComplex>,
    pub errors: Vec<BallReal>,
    pub rho_sep: BallReal,
    pub m_inf_sep: BallReal,
    pub qnorm: BallReal,
    /// `(n, error_bound(n, 1), error_bound(n, 2))`.
    pub bounds: Vec<(u64, BallReal, BallReal)>,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineSummary {
    pub attempts: Vec<Attempt>,
    pub windows: Vec<WindowRow>,
    pub fine: Vec<FineRow>,
    pub expansion: Option<ExpansionRow>,
    pub failures: Vec<String>,
    pub hits: usize,
    pub misses: usize,
    pub files: Vec<PathBuf>,
}

impl PipelineSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Fraction of store lookups answered from the store.
    pub fn hit_rate(&self) -> f64 {
        let t = self.hits + self.misses;
        if t == 0 {
            1.0
        } else {
            self.hits as f64 / t as f64
        }
    }
}

/// Matrices and operator contexts, built on demand.
struct Contexts {
    dir: PathBuf,
    matrices: HashMap<(usize, u32), GKWMatrix>,
    contexts: HashMap<(usize, u32), Arc<OperatorContext>>,
}

impl Contexts {
    fn get(&mut self, k: usize, prec: u32) -> Result<Arc<OperatorContext>, PipelineError> {
        if let Some(c) = self.contexts.get(&(k, prec)) {
            return Ok(c.clone());
        }
        let m = match self.matrices.remove(&(k, prec)) {
            Some(m) => m,
            None => {
                let p = self.dir.join(matrix_key(k, prec).file_name());
                GKWMatrix::from_text(&std::fs::read_to_string(p)?)?
            }
        };
        let c = Arc::new(OperatorContext::from_gkw(&m)?);
        self.contexts.insert((k, prec), c.clone());
        Ok(c)
    }
}

pub fn matrix_key(k: usize, prec: u32) -> CertKey {
    CertKey::new("matrix").with("K", k).with("prec", prec)
}

struct Run<'a> {
    cfg: &'a PipelineConfig,
    store: &'a mut CertificateStore,
    ctx: Contexts,
    s: PipelineSummary,
}

fn outcome(s: &Stored) -> Result<(), String> {
    s.as_ref().map(|_| ()).map_err(Clone::clone)
}

impl Run<'_> {
    fn matrix(&mut self, k: usize, prec: u32) -> Result<Stored, PipelineError> {
        let key = matrix_key(k, prec);
        let mut built = None;
        let (stored, hit) = self.store.get_or_compute(&key, || {
            let m = assemble_matrix(k, prec)?;
            let rec = Record::parse(&m.to_text(&m.budget()?))?;
            built = Some(m);
            Ok(rec)
        })?;
        if let Some(m) = built {
            self.ctx.matrices.insert((k, prec), m);
        }
        self.s.attempts.push(Attempt {
            stage: "assemble".into(),
            k,
            prec,
            m: 0,
            cached: hit,
            outcome: outcome(&stored),
        });
        Ok(stored)
    }

    fn levels(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut k = self.cfg.k_coarse;
        while k <= self.cfg.max_k {
            let mut p = self.cfg.prec;
            while p <= self.cfg.max_prec {
                out.push((k, p));
                p *= 2;
            }
            k *= 2;
        }
        out
    }

    /// Escalation: `m` doubles first, then precision, then `K`.
    fn window(&mut self, target: Target) -> Result<(), PipelineError> {
        let mut last = String::from("not attempted");
        for (k, prec) in self.levels() {
            if let Err(e) = self.matrix(k, prec)? {
                last = format!("assembly at K = {k}, {prec} bits: {e}");
                continue;
            }
            let mut m = self.cfg.m;
            while m <= self.cfg.max_m {
                let key = CertKey::new("window")
                    .with("K", k)
                    .with("prec", prec)
                    .with("target", target.label())
                    .with("m", m)
                    .with("n_full", self.cfg.n_full)
                    .with("block", self.cfg.block)
                    .with("radius_factor", self.cfg.radius_factor);
                let (cfg, ctxs) = (self.cfg, &mut self.ctx);
                let (stored, hit) = self.store.get_or_compute(&key, || {
                    let ctx = ctxs.get(k, prec)?;
                    let policy = cfg.policy(m);
                    let spec = match target {
                        Target::Eigenvalue(j) => {
                            let mut s = ctx.default_window(j, &policy)?;
                            s.rho =
                                BallReal::from_f64(s.rho.mid_f64() * 3.0 * cfg.radius_factor, 128);
                            s
                        }
                        Target::Gap(j) => ctx.gap_window(j, &policy)?,
                    };
                    Record::parse(&certify_window(&ctx, &spec)?.to_text())
                })?;
                self.s.attempts.push(Attempt {
                    stage: format!("window {}", target.label()),
                    k,
                    prec,
                    m,
                    cached: hit,
                    outcome: outcome(&stored),
                });
                match stored {
                    Ok(rec) => {
                        self.s.windows.push(WindowRow::from_record(
                            target,
                            prec,
                            m,
                            key.digest(),
                            &rec,
                        )?);
                        return Ok(());
                    }
                    Err(e) => last = format!("K = {k}, {prec} bits, m = {m}: {e}"),
                }
                m *= 2;
            }
        }
        self.s.failures.push(format!(
            "window {}: precision exhausted (max_prec = {}, max_m = {}, max_K = {}); last attempt {last}",
            target.label(),
            self.cfg.max_prec,
            self.cfg.max_m,
            self.cfg.max_k
        ));
        Ok(())
    }

    fn fine(&mut self) -> Result<(), PipelineError> {
        let (kf, pf) = (self.cfg.k_fine, self.cfg.fine_precision());
        let eps_fine = match self.matrix(kf, pf)? {
            Ok(r) => r.ball("eps_K", pf)?,
            Err(e) => {
                self.s
                    .failures
                    .push(format!("fine assembly at K = {kf}, {pf} bits: {e}"));
                return Ok(());
            }
        };
        for w in self.s.windows.clone() {
            let key = CertKey::new("fine")
                .with("window", &w.digest)
                .with("K_fine", kf)
                .with("prec_fine", pf);
            let (stored, hit) = self.store.get_or_compute(&key, || {
                let f = propagate_bounds(w.k, &w.m_lk, &w.eps_k, &w.rho, kf, &eps_fine)?;
                let mut r = Record::new();
                r.push("K_fine", kf)
                    .push("eps_fine", &f.eps_fine)
                    .push("M_L", &f.m_operator)
                    .push("M_fine", &f.m_fine)
                    .push("alpha_fine", &f.alpha_fine)
                    .push("theta_fine", &f.theta_fine);
                Ok(r)
            })?;
            self.s.attempts.push(Attempt {
                stage: format!("fine {}", w.target.label()),
                k: kf,
                prec: pf,
                m: w.m,
                cached: hit,
                outcome: outcome(&stored),
            });
            match stored {
                Ok(r) => self.s.fine.push(FineRow {
                    target: w.target,
                    k_fine: kf,
                    eps_fine: r.ball("eps_fine", pf)?,
                    m_operator: r.ball("M_L", pf)?,
                    m_fine: r.ball("M_fine", pf)?,
                    alpha_fine: r.ball("alpha_fine", pf)?,
                    theta_fine: r.ball("theta_fine", pf)?,
                }),
                Err(e) => self
                    .s
                    .failures
                    .push(format!("fine level for window {}: {e}", w.target.label())),
            }
        }
        Ok(())
    }

    fn expansion(&mut self) -> Result<(), PipelineError> {
        let (k, prec, n) = (self.cfg.k_coarse, self.cfg.prec, self.cfg.modes);
        if let Err(e) = self.matrix(k, prec)? {
            self.s.failures.push(format!("expansion: {e}"));
            return Ok(());
        }
        let key = CertKey::new("expansion")
            .with("K", k)
            .with("prec", prec)
            .with("modes", n)
            .with("n_full", self.cfg.n_full)
            .with("block", self.cfg.block)
            .with("m", self.cfg.m)
            .with("max_m", self.cfg.max_m);
        let (cfg, ctxs) = (self.cfg, &mut self.ctx);
        let (stored, hit) = self.store.get_or_compute(&key, || {
            let ctx = ctxs.get(k, prec)?;
            let mut policy = cfg.policy(cfg.m);
            policy.max_m = cfg.max_m;
            let cert = ExpansionCertificate::certify(&ctx, n, &policy)?;
            let mut r = Record::new();
            r.push("n_modes", n)
                .push("rho_sep", &cert.rho_sep)
                .push("M_inf_sep", &cert.m_inf_sep)
                .push("qnorm", &cert.qnorm);
            for (j, m) in cert.modes.iter().enumerate() {
                r.push(format!("lambda[{}]", j + 1), m.lambda.to_text())
                    .push(format!("coeff[{}]", j + 1), m.coeff.to_text())
                    .push(format!("error[{}]", j + 1), &m.error);
            }
            for t in 0..=EXPANSION_TABLE_N {
                r.push(format!("bound1[{t}]"), cert.error_bound(t, 1))
                    .push(format!("bound2[{t}]"), cert.error_bound(t, 2));
            }
            Ok(r)
        })?;
        self.s.attempts.push(Attempt {
            stage: "expansion".into(),
            k,
            prec,
            m: self.cfg.m,
            cached: hit,
            outcome: outcome(&stored),
        });
        let r = match stored {
            Ok(r) => r,
            Err(e) => {
                self.s.failures.push(format!("expansion: {e}"));
                return Ok(());
            }
        };
        let cx = |key: String| -> Result<BallComplex, PipelineError> {
            r.complex(&key, prec)?
                .ok_or_else(|| PipelineError::Record(format!("`{key}` is none")))
        };
        let mut row = ExpansionRow {
            k,
            n_modes: n,
            lambdas: Vec::new(),
            coeffs: Vec::new(),
            errors: Vec::new(),
            rho_sep: r.ball("rho_sep", prec)?,
            m_inf_sep: r.ball("M_inf_sep", prec)?,
            qnorm: r.ball("qnorm", prec)?,
            bounds: Vec::new(),
        };
        for j in 1..=n {
            row.lambdas.push(cx(format!("lambda[{j}]"))?);
            row.coeffs.push(cx(format!("coeff[{j}]"))?);
            row.errors.push(r.ball(&format!("error[{j}]"), prec)?);
        }
        for t in 0..=EXPANSION_TABLE_N {
            row.bounds.push((
                t,
                r.ball(&format!("bound1[{t}]"), prec)?,
                r.ball(&format!("bound2[{t}]"), prec)?,
            ));
        }
        self.s.expansion = Some(row);
        Ok(())
    }
}

/// Assemble, certify windows with escalation, propagate to the fine level,
/// certify the expansion, and write tables into the configured directory.
pub fn run_pipeline(
    cfg: &PipelineConfig,
    store: &mut CertificateStore,
) -> Result<PipelineSummary, PipelineError> {
    cfg.validate()?;
    let (h0, m0) = (store.hits, store.misses);
    let ctx = Contexts {
        dir: store.dir().to_path_buf(),
        matrices: HashMap::new(),
        contexts: HashMap::new(),
    };
    let mut run = Run {
        cfg,
        store,
        ctx,
        s: PipelineSummary::default(),
    };
    let mut targets: Vec<Target> = (1..=cfg.windows).map(Target::Eigenvalue).collect();
    if let Some(g) = cfg.gap {
        targets.push(Target::Gap(g));
    }
    for t in targets {
        run.window(t)?;
    }
    if !run.s.windows.is_empty() {
        run.fine()?;
    }
    if cfg.modes > 0 {
        run.expansion()?;
    }
    let mut s = run.s;
    s.hits = store.hits - h0;
    s.misses = store.misses - m0;
    s.files = crate::tables::emit_tables(&s, &cfg.out_dir)?;
    Ok(s)
}
