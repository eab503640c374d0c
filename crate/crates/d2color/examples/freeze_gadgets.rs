//! Searches for the three base gadgets and writes them, with their
//! certification reports, to `data/gadgets/`.
//!
//! Run with `cargo run --release --example freeze_gadgets`.

use std::path::Path;
use std::time::Instant;

use d2color::gadget::{synthesize_gadget, Role, SynthBounds, SynthResult};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/gadgets");
    let jobs = [
        ("clause", Role::Clause, SynthBounds::new(12, 12)),
        ("variable", Role::Variable, SynthBounds::new(8, 7)),
        ("fanout", Role::Fanout(2), SynthBounds::new(60, 60)),
    ];
    for (name, role, bounds) in jobs {
        let start = Instant::now();
        match synthesize_gadget(role, &bounds).expect("valid bounds") {
            SynthResult::Found { gadget, report, candidates } => {
                println!(
                    "{name}: {} vertices, {} edges, {candidates} candidates, {:.1?}",
                    gadget.graph().vertex_count(),
                    gadget.graph().edge_count(),
                    start.elapsed()
                );
                std::fs::write(dir.join(format!("{name}.gadget")), gadget.to_text()).expect("write gadget");
                std::fs::write(dir.join(format!("{name}.cert")), report.to_text()).expect("write report");
            }
            SynthResult::NotFound { candidates, .. } => {
                println!("{name}: not found after {candidates} candidates");
            }
        }
    }
}
