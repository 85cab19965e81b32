// Separate binary: the test mutates the process environment.

use sumrule_cli::run;

fn code(args: &[&str]) -> i32 {
    let argv: Vec<String> = std::iter::once("sumrule").chain(args.iter().copied()).map(String::from).collect();
    run(&argv, &mut Vec::new(), &mut Vec::new())
}

#[test]
fn worker_env_is_validated() {
    std::env::set_var("SUMRULE_WORKERS", "two");
    assert_eq!(code(&["enum-d", "--k", "1", "--l", "1"]), 2);
    std::env::set_var("SUMRULE_WORKERS", "2");
    assert_eq!(code(&["enum-d", "--k", "1", "--l", "1"]), 0);
    std::env::remove_var("SUMRULE_WORKERS");
}
