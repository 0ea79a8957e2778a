// A small participation sweep driven by an experiment file, written out as
// `detail.csv` and `summary.csv`.

use std::error::Error;

use deepgroup::harness::{emit_results, parse_plan, read_detail_csv, run_plan, summarize};
use deepgroup::standin;

const PLAN: &str = "
# participation sweep on a 400-user sample
preference_file = dublin_west.soi
n_users = 400
kappa = 1, 4
rule = plurality
methods = deepgroup, pop, rtcp, osim
instances = 2
seed = 11
user_dim = 8
item_dim = 8
hidden_sizes = 16, 8
epochs = 10
batch_size = 1024
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("deepgroup-sweep-{}", std::process::id()));
    standin::ensure_file(&dir, &standin::DUBLIN_WEST)?;
    let cells = parse_plan(PLAN, &dir)?;
    let reports = run_plan(&cells)?;
    for r in &reports {
        for m in &r.methods {
            println!("kappa {:>2} {:<9} {:.3} ± {:.3}", r.size_param, m.method.name(), m.mean, m.std);
        }
    }
    let (detail, summary) = emit_results(&reports, &dir.join("results"))?;
    println!("{}", std::fs::read_to_string(&summary)?);
    assert_eq!(summarize(&read_detail_csv(&detail)?).len(), 8);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
