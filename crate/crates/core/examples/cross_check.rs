//! Runs the rules-versus-oracle cross-check over every standard parameter set
//! and prints per-config totals and rule-branch hit counts.

use std::time::Instant;

use hopfore::envelope::{cross_check, envelope_pairs, standard_configs, CheckOptions};

fn main() {
    for cfg in standard_configs() {
        let t0 = Instant::now();
        let pairs = envelope_pairs(&cfg);
        let rep = cross_check(&cfg, CheckOptions::default());
        println!(
            "{}: {} pairs, {} matched, {} mismatches, {} errors, {:.1}s",
            cfg.name, pairs.len(), rep.matched, rep.mismatches.len(), rep.errors.len(), t0.elapsed().as_secs_f64()
        );
        for m in rep.mismatches.iter().take(5) {
            println!("  MISMATCH {} x {}\n    rules  {}\n    oracle {}", m.left, m.right, m.rules, m.oracle);
        }
        for e in rep.errors.iter().take(5) {
            println!("  ERROR {e}");
        }
        println!("  hits {:?}", rep.rule_hits);
    }
}
