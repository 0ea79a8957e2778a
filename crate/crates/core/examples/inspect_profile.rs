// Reads an election file and prints what the rest of the crate sees.
//
// Uses the real Sushi file when `DEEPGROUP_DATA_DIR` has it, otherwise the
// synthetic stand-in.

use std::error::Error;

use deepgroup::preflib::parse_preference_file;
use deepgroup::social_choice::kendall_tau;
use deepgroup::standin;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let text = match standin::real_file(&standin::SUSHI) {
        Some(path) => std::fs::read_to_string(path)?,
        None => standin::to_aggregated_preflib(&standin::generate(&standin::SUSHI), "sushi.soc"),
    };
    let profile = parse_preference_file(&text)?;
    println!("{} voters over {} alternatives", profile.num_voters(), profile.num_alternatives());

    let mut firsts = vec![0usize; profile.num_alternatives()];
    for r in profile.voters() {
        firsts[r.top().index()] += 1;
    }
    for (name, count) in profile.alternative_names().iter().zip(&firsts) {
        println!("  {name:<12} first choice of {count}");
    }

    let (a, b) = (profile.ranking(0), profile.ranking(profile.num_voters() - 1));
    let show = |r: &deepgroup::Ranking| r.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" > ");
    println!("voter 0: {}", show(a));
    println!("voter {}: {}", profile.num_voters() - 1, show(b));
    println!("kendall tau-b: {:.3}", kendall_tau(a, b)?);

    // Writing the profile back out and parsing it again is lossless.
    let again = parse_preference_file(&profile.to_preflib_string())?;
    assert_eq!(again.voters(), profile.voters());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
