use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().skip(1).collect();
    let json = dpl_lee::cli::wants_json(args.iter().cloned());
    let result = dpl_lee::cli::run(args);
    let ok = matches!(result.status, 0..=2);
    match (&result.payload, json) {
        (Some(p), true) => println!("{p}"),
        _ if ok => println!("{}", result.summary),
        _ => eprintln!("{}", result.summary),
    }
    ExitCode::from(result.status as u8)
}
