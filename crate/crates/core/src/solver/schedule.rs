//! Level-synchronised local time stepping plan for one global step.

/// One stage of the plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    /// Levels that advance in this stage, ascending.
    pub levels: Vec<u8>,
    /// Sub-step of each advancing level, same order as `levels`.
    pub dt: Vec<f64>,
    /// Coarser levels whose buffered interface fluxes are consumed here
    /// (every advancing level except the finest).
    pub flush: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtsSchedule {
    pub coarsest: u8,
    pub finest: u8,
    pub dt_min: f64,
    pub stages: Vec<Stage>,
}

impl LtsSchedule {
    /// Global step length.
    pub fn dt(&self) -> f64 {
        self.dt_min * (1u64 << (self.finest - self.coarsest)) as f64
    }

    /// Sub-step of level `l`.
    pub fn substep(&self, l: u8) -> f64 {
        self.dt_min * (1u64 << (self.finest - l.max(self.coarsest))) as f64
    }

    /// Whether level `l` advances in stage `s` (0-based).
    pub fn advances(&self, s: usize, l: u8) -> bool {
        let period = 1usize << (self.finest - l.max(self.coarsest));
        (s + 1) % period == 0
    }

    /// Time offset (from the start of the global step) at which the
    /// sub-step of level `l` ending at stage `s` begins.
    pub fn substep_start(&self, s: usize, l: u8) -> f64 {
        (s + 1) as f64 * self.dt_min - self.substep(l)
    }
}

/// Schedule over the present levels. Level `l` advances every
/// `2^(finest − l)` stages with sub-step `2^(finest − l) Δt_min`; all levels
/// meet after `2^(finest − coarsest)` stages.
pub fn build_schedule(levels: &[u8], dt_min: f64) -> LtsSchedule {
    let coarsest = levels.iter().copied().min().unwrap_or(0);
    let finest = levels.iter().copied().max().unwrap_or(0);
    let mut sched = LtsSchedule {
        coarsest,
        finest,
        dt_min,
        stages: Vec::new(),
    };
    let n = 1usize << (finest - coarsest);
    for s in 0..n {
        let adv: Vec<u8> = levels
            .iter()
            .copied()
            .filter(|&l| sched.advances(s, l))
            .collect();
        let dt = adv.iter().map(|&l| sched.substep(l)).collect();
        let flush = adv.iter().copied().filter(|&l| l != finest).collect();
        sched.stages.push(Stage {
            levels: adv,
            dt,
            flush,
        });
    }
    sched
}
