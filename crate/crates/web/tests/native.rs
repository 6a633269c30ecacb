use arbordim_web::{aut_order_json, dimension_json, tree_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn aut_order_small_and_large() {
    let v = parse(aut_order_json(2, 3).unwrap());
    assert_eq!(v["order"], "128");
    assert_eq!(v["cross_check"], "match");
    let v = parse(aut_order_json(2, 12).unwrap());
    assert_eq!(v["cross_check"], "skipped: cap");
}

#[test]
fn dimension_rows() {
    let v = parse(dimension_json("x^2+1", "0", 2).unwrap());
    let degs: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["deg_n"].as_str().unwrap()).collect();
    assert_eq!(degs, ["1", "2", "8"]);
    let v = parse(dimension_json("x^2-1", "0", 2).unwrap());
    assert_eq!(v["flags"][0], "periodic m=2");
}

#[test]
fn tree_levels() {
    let v = parse(tree_json("x^2-1", "0", 3).unwrap());
    assert_eq!(v["level_sizes"], serde_json::json!([1, 2, 3, 6]));
    assert!(v["dot"].as_str().unwrap().starts_with("digraph"));
}

#[test]
fn errors_are_strings() {
    assert!(dimension_json("x^2+", "0", 2).is_err());
    assert!(dimension_json("x^3", "2", 2).is_err());
    assert!(tree_json("x^2", "zz", 2).is_err());
}
