//! Whitespace-separated data files for the standard figures, plus a
//! gnuplot script that references only the emitted files.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};
use polylab::autocorr::{autocorr_profile, fit_log_log};
use polylab::distribution::saffari_discrepancy;
use polylab::zeros::{classify, find_roots, unimodular_count_reciprocal};
use polylab::{fekete, rudin_shapiro};

use crate::config::RunConfig;

pub struct PlotSelection {
    pub saffari_ks: Vec<u32>,
    pub autocorr_ks: Vec<u32>,
    pub annulus_ks: Vec<u32>,
    pub fekete_ps: Vec<u64>,
}

impl PlotSelection {
    pub fn is_empty(&self) -> bool {
        self.saffari_ks.is_empty()
            && self.autocorr_ks.is_empty()
            && self.annulus_ks.is_empty()
            && self.fekete_ps.is_empty()
    }
}

pub fn emit(dir: &Path, sel: &PlotSelection, cfg: &RunConfig) -> Result<Vec<String>> {
    if sel.is_empty() {
        bail!("plot selection is empty");
    }
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    if !sel.saffari_ks.is_empty() {
        let path = dir.join("saffari_supdev.dat");
        let mut out = std::fs::File::create(&path)?;
        writeln!(out, "# k sup_dev")?;
        for &k in &sel.saffari_ks {
            let n_grid = (cfg.grid_factor.max(16) << k).next_power_of_two();
            let rep = saffari_discrepancy(k, n_grid)?;
            writeln!(out, "{k} {:.9e}", rep.sup_dev)?;
        }
        files.push("saffari_supdev.dat".to_string());
    }

    if !sel.autocorr_ks.is_empty() {
        let path = dir.join("autocorr_maxabs.dat");
        let mut points = Vec::new();
        for &k in &sel.autocorr_ks {
            let p = autocorr_profile(k)?;
            if p.max_abs > 0 {
                points.push((p.n as f64, p.max_abs as f64));
            }
        }
        let mut out = std::fs::File::create(&path)?;
        if points.len() >= 2 {
            let fit = fit_log_log(&points)?;
            writeln!(out, "# fitted slope {:.6} +- {:.6}", fit.slope, fit.half_width)?;
        }
        writeln!(out, "# log_n log_max_abs")?;
        for (n, m) in &points {
            writeln!(out, "{:.9e} {:.9e}", n.ln(), m.ln())?;
        }
        files.push("autocorr_maxabs.dat".to_string());
    }

    if !sel.annulus_ks.is_empty() {
        let path = dir.join("annulus_fraction.dat");
        let mut out = std::fs::File::create(&path)?;
        writeln!(out, "# k annulus_count fraction (c1 = 2)")?;
        for &k in &sel.annulus_ks {
            let pair = rudin_shapiro(k)?;
            let roots = find_roots::<f64>(&pair.p, None)?;
            let cls = classify(&roots, pair.n, cfg.delta_circle, 2.0);
            writeln!(out, "{k} {} {:.9e}", cls.annulus, cls.annulus_fraction())?;
        }
        files.push("annulus_fraction.dat".to_string());
    }

    if !sel.fekete_ps.is_empty() {
        let path = dir.join("fekete_fraction.dat");
        let mut out = std::fs::File::create(&path)?;
        writeln!(out, "# p count fraction")?;
        for &p in &sel.fekete_ps {
            let f = fekete(p)?;
            let n_grid = (cfg.grid_factor.max(8) * p as usize).next_power_of_two();
            let c = unimodular_count_reciprocal::<f64>(&f, n_grid)?;
            writeln!(out, "{p} {} {:.9e}", c.count(), c.fraction())?;
        }
        files.push("fekete_fraction.dat".to_string());
    }

    let script = dir.join("plot.gp");
    let mut out = std::fs::File::create(&script)?;
    writeln!(out, "set terminal pngcairo size 900,600")?;
    for f in &files {
        let stem = f.trim_end_matches(".dat");
        writeln!(out, "set output '{stem}.png'")?;
        match stem {
            "saffari_supdev" => {
                writeln!(out, "set logscale y")?;
                writeln!(out, "plot '{f}' using 1:2 with linespoints title 'sup dev'")?;
                writeln!(out, "unset logscale y")?;
            }
            "autocorr_maxabs" => {
                writeln!(
                    out,
                    "plot '{f}' using 1:2 with points title 'log max|a_j| vs log n'"
                )?;
            }
            "annulus_fraction" => {
                writeln!(out, "plot '{f}' using 1:3 with linespoints title 'annulus fraction'")?;
            }
            "fekete_fraction" => {
                writeln!(out, "plot '{f}' using 1:3 with points title 'unimodular fraction'")?;
            }
            _ => {}
        }
    }
    files.push("plot.gp".to_string());
    Ok(files)
}
