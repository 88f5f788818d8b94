//! Drive the command-line front end in-process and print its CSV and JSON.

use ts_fracderiv::cli;

fn main() {
    let runs: [&[&str]; 3] = [
        &[
            "tsfrac", "table", "--scale", "hZ:1", "--f", "(t-3)^2", "--alpha", "0.5", "--from",
            "0", "--to", "5",
        ],
        &[
            "tsfrac",
            "table",
            "--scale",
            "[0,1]u{2}",
            "--f",
            "t",
            "--alpha",
            "0.5",
            "--from",
            "0",
            "--to",
            "2",
            "--step",
            "0.5",
            "--format",
            "json",
        ],
        &[
            "tsfrac",
            "check",
            "--rule",
            "sum-counterexample",
            "--scale",
            "Z",
            "--f",
            "t",
            "--g",
            "2*t",
            "--alpha",
            "0.5",
            "--points",
            "1,2,3",
        ],
    ];
    for args in runs {
        let out = cli::run(args.iter().copied());
        println!("$ {}", args.join(" "));
        print!("{}", out.stdout);
        eprint!("{}", out.stderr);
        println!("(exit {})\n", out.code);
    }
}
