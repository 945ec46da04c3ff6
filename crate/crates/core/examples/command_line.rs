//! Driving the command line front end in-process on the files in
//! `examples/data`.

use iwasawa::Result;

pub fn run() -> Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let jobs: Vec<Vec<String>> = vec![
        vec!["mulam".into(), "--series".into(), format!("{data}/series_mixed.json")],
        vec!["charideal".into(), "--matrix".into(), format!("{data}/presentation.json")],
        vec!["invariants".into(), "--series".into(), format!("{data}/series_t_plus_2.json"), "--levels".into(), "2..4".into(), "--table".into()],
        vec!["euler".into(), "--scenario".into(), format!("{data}/scenario.json"), "--check".into(), "invariance".into(), "--r".into(), "q1q2".into()],
    ];
    for job in jobs {
        let mut out = Vec::new();
        let args = std::iter::once("iwasawa".to_string()).chain(job.iter().cloned());
        let code = iwasawa::cli::run(args, &mut out);
        println!("$ iwasawa {}  (exit {code})", job[0]);
        print!("{}", String::from_utf8_lossy(&out));
        if code != 0 {
            return Err(iwasawa::Error::DomainError(format!("{} failed", job[0])));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
