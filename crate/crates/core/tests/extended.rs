use morita::pipeline::{count_morita, Method, RunConfig};

#[test]
fn weight_three_p5() {
    let r = count_morita(5, 3, Method::Decomp, &RunConfig::default()).unwrap().report;
    assert_eq!((r.lower_bound, r.upper_bound, r.value), (147, 147, Some(147)));
}

#[test]
fn weight_four_p5_is_an_interval() {
    let r = count_morita(5, 4, Method::M, &RunConfig::default()).unwrap().report;
    assert_eq!((r.lower_bound, r.upper_bound), (496, 507));
    assert!(!r.determined && r.value.is_none());
    assert_eq!(r.classes.iter().map(|c| c.cores.len()).sum::<usize>(), r.scopes_count);
}

#[test]
fn direct_enumeration_gives_the_same_report() {
    let direct = RunConfig { direct_enumeration: true, ..RunConfig::default() };
    let a = count_morita(5, 2, Method::Decomp, &RunConfig::default()).unwrap().report;
    let b = count_morita(5, 2, Method::Decomp, &direct).unwrap().report;
    assert_eq!(a, b);
}

#[test]
#[ignore = "hours; run with --ignored"]
fn weight_three_p7() {
    // the search by size needs a cap of at least 448 here
    let config = RunConfig { direct_enumeration: true, ..RunConfig::default() };
    let r = count_morita(7, 3, Method::Decomp, &config).unwrap().report;
    assert_eq!(r.value, Some(3936));
}

#[test]
#[ignore = "about a day; run with --ignored"]
fn weight_two_p11() {
    let config = RunConfig { direct_enumeration: true, ..RunConfig::default() };
    let r = count_morita(11, 2, Method::Decomp, &config).unwrap().report;
    assert_eq!(r.value, Some(29624));
}
