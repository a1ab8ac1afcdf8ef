//! Parsing and validating scenario descriptions.

use btz_geometry::scenario::parse_scenario;

const GOOD: &str = r#"
[scenario]
kind = "conical"

[lambda]
points = [[0.0, 0.0], [1.5707963267948966, 1.5707963267948966], [3.141592653589793, 0.0]]

[[group.generators]]
exp = true
left = [1.0, 0.0, 0.0, -1.0]
right = [0.0, 0.0, 0.0, 0.0]
"#;

const BAD: &str = r#"
[scenario]
kind = "splitting"

[btz]
r_plus = 1.0
r_minus = 2.0
"#;

fn main() {
    match parse_scenario(GOOD, "inline") {
        Ok(s) => {
            let v = s.validate();
            println!(
                "{} ({}): {} {}",
                s.id,
                s.group_summary(),
                v.passed,
                v.message
            );
        }
        Err(e) => println!("unexpected: {e}"),
    }
    match parse_scenario(BAD, "bad") {
        Ok(s) => println!("parsed {}", s.id),
        Err(e) => println!("rejected: {e}"),
    }
    match parse_scenario("[scenario\nkind = 1", "broken") {
        Ok(_) => println!("parsed"),
        Err(e) => println!("rejected: {e}"),
    }
}
