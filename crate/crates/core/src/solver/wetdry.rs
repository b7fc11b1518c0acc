/// Mass and scalar changes caused by clamping nearly dry cells.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WetDryLedger {
    /// Water added by lifting negative depths to zero (volume).
    pub mass_added: f64,
    /// Scalar mass removed from cells that fell dry.
    pub scalar_removed: f64,
    pub events: u64,
}

/// Depth, in units of `h_dry`, below which velocities are desingularised.
pub const THIN_DEPTH: f64 = 100.0;

/// Cells with `h < h_dry` keep `max(h, 0)` and lose their momentum and
/// scalar; the changes are booked in the ledger. Thin cells get the
/// velocity `2h·hu / (h² + ε²)` with `ε = THIN_DEPTH·h_dry`.
pub fn wet_dry_fixup(w: &mut [f64; 4], area: f64, h_dry: f64, ledger: &mut WetDryLedger) {
    if w[0] >= h_dry {
        let e = THIN_DEPTH * h_dry;
        if w[0] < e {
            let h = w[0];
            let f = 2.0 * h * h / (h * h + e * e);
            w[1] *= f;
            w[2] *= f;
        }
        return;
    }
    if w[0] < 0.0 {
        ledger.mass_added -= w[0] * area;
    }
    if w[0] != 0.0 || w[1] != 0.0 || w[2] != 0.0 || w[3] != 0.0 {
        ledger.events += 1;
    }
    ledger.scalar_removed += w[3] * area;
    *w = [w[0].max(0.0), 0.0, 0.0, 0.0];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_examples() {
        let mut l = WetDryLedger::default();
        let mut w = [-1e-9, 0.1, 0.2, 0.0];
        wet_dry_fixup(&mut w, 2.0, 1e-6, &mut l);
        assert_eq!(w, [0.0; 4]);
        assert!((l.mass_added - 2e-9).abs() < 1e-24);
        let mut w = [0.5, 0.1, 0.2, 0.3];
        wet_dry_fixup(&mut w, 2.0, 1e-6, &mut l);
        assert_eq!(w, [0.5, 0.1, 0.2, 0.3]);
        assert_eq!(l.events, 1);
        // at h = ε the velocity is kept, below it is damped
        let mut w = [1e-4, 1e-4, 0.0, 0.0];
        wet_dry_fixup(&mut w, 1.0, 1e-6, &mut l);
        assert_eq!(w[1], 1e-4);
        let mut w = [1e-5, 1e-4, 0.0, 0.0];
        wet_dry_fixup(&mut w, 1.0, 1e-6, &mut l);
        assert!((w[1] - 1e-4 * 2.0 / 101.0).abs() < 1e-18);
    }
}
