//! Acceptance suite: runs every verification criterion and prints one
//! pass/fail line per item (use `-- --nocapture` to see the lines for
//! passing runs).

use sgap_cli::verify::{self, Check};

fn report(check: Check) {
    println!("{}", check.format_line());
    assert!(check.pass, "{}", check.format_line());
}

#[test]
fn criterion_01_golden_mean_closed_form() {
    report(verify::check_golden_mean_root());
}

#[test]
fn criterion_02_spectral_cross_check() {
    report(verify::check_spectral_cross());
}

#[test]
fn criterion_03_moran_reduction() {
    report(verify::check_moran_reduction());
}

#[test]
fn criterion_04_entropy_consistency() {
    report(verify::check_entropy_consistency());
}

#[test]
fn criterion_05_language_oracle() {
    report(verify::check_language_oracle());
}

#[test]
fn criterion_06_word_sums_at_the_root() {
    report(verify::check_root_level_sums());
}

#[test]
fn criterion_07_core_power_sandwich() {
    report(verify::check_core_power_sandwich());
}

#[test]
fn criterion_08_cylinder_additivity() {
    report(verify::check_cylinder_additivity());
}

#[test]
fn criterion_09a_box_dimension_full_shift() {
    report(verify::check_box_dimension_full_shift());
}

#[test]
fn criterion_09b_box_dimension_golden_mean() {
    report(verify::check_box_dimension_golden_mean());
}

#[test]
fn criterion_09c_box_dimension_prime_gaps() {
    report(verify::check_box_dimension_prime_gaps());
}

#[test]
fn criterion_10_bound_ordering() {
    report(verify::check_bound_ordering());
}
