use std::process::ExitCode;

fn main() -> ExitCode {
    whittaker_lab::cli::init_thread_pool();
    let mut failed = 0;
    for c in whittaker_lab::acceptance::criteria() {
        let r = c.run();
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {} [{}] {}: {} ({:.1}s)",
            r.id,
            status,
            r.name,
            r.detail,
            r.elapsed.as_secs_f64()
        );
        failed += usize::from(!r.passed);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
