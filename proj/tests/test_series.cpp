#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "tsforecast/transforms.hpp"

using namespace tsf;
using Catch::Matchers::WithinAbs;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected tsf::Error");
    return ErrorCode::structural;
}

}  // namespace

TEST_CASE("period arithmetic", "[series]") {
    const Period p{2010, 11};
    CHECK(p.advanced(2) == Period{2011, 1});
    CHECK(p.advanced(-11) == Period{2009, 12});
    CHECK(Period::from_index(p.index()) == p);
    CHECK(p.to_string() == "2010-11");
    CHECK(Period{2021, 12} < Period{2022, 1});
}

TEST_CASE("time series construction", "[series]") {
    const TimeSeries s({1.0, 2.0, 3.0}, {2010, 1});
    CHECK(s.size() == 3);
    CHECK(s.end() == Period{2010, 3});
    CHECK(s.frequency() == 12);
    CHECK(code_of([] { TimeSeries({1.0, std::nan("")}); }) == ErrorCode::invalid_value);
    CHECK(code_of([] { TimeSeries({1.0, INFINITY}); }) == ErrorCode::invalid_value);
    CHECK(code_of([] { TimeSeries({1.0}, {2010, 13}); }) == ErrorCode::invalid_value);
}

TEST_CASE("difference examples", "[series][difference]") {
    const TimeSeries s({1, 2, 4, 7}, {2010, 1});
    auto [d1, st1] = difference(s, 1);
    CHECK(d1.vector() == std::vector<double>{1, 2, 3});
    CHECK(st1.seeds == std::vector<double>{1});
    CHECK(d1.start() == Period{2010, 2});

    auto [d2, st2] = difference(s, 2);
    CHECK(d2.vector() == std::vector<double>{1, 1});
    CHECK(st2.seeds == std::vector<double>{1, 1});

    auto [d0, st0] = difference(s, 0);
    CHECK(d0 == s);
    CHECK(st0.seeds.empty());

    CHECK(code_of([&] { (void)difference(s, 4); }) == ErrorCode::degenerate_input);
    CHECK(code_of([&] { (void)difference(s, -1); }) == ErrorCode::bounds);
}

TEST_CASE("undifference examples", "[series][difference]") {
    const TimeSeries d({1, 2, 3}, {2010, 2});
    const auto u = undifference(d, DifferenceState{1, {1}});
    CHECK(u.vector() == std::vector<double>{1, 2, 4, 7});
    CHECK(u.start() == Period{2010, 1});
    CHECK(undifference(d, DifferenceState{0, {}}) == d);
    CHECK(code_of([&] { (void)undifference(d, DifferenceState{2, {1}}); }) == ErrorCode::state_corruption);
}

TEST_CASE("difference round trip property", "[series][difference][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = trial % 4;
        const auto n = static_cast<std::size_t>(d + 1 + trial % 97);
        const TimeSeries s(test_support::random_vector(rng, n), {2000 + trial % 20, 1 + trial % 12});
        const auto [diffed, state] = difference(s, d);
        REQUIRE(diffed.size() == n - static_cast<std::size_t>(d));
        REQUIRE(state.seeds.size() == static_cast<std::size_t>(d));
        const auto back = undifference(diffed, state);
        REQUIRE(back.start() == s.start());
        REQUIRE(test_support::max_abs_diff(back.vector(), s.vector()) <= 1e-9);
    }
}

TEST_CASE("length-100 series, d = 2 round trip", "[series][difference]") {
    Rng rng(7);
    const TimeSeries s(test_support::random_vector(rng, 100));
    const auto [d2, st] = difference(s, 2);
    CHECK(test_support::max_abs_diff(undifference(d2, st).vector(), s.vector()) <= 1e-9);
}

TEST_CASE("scaler examples", "[series][scaler]") {
    const auto st = fit_scaler(TimeSeries({0, 5, 10}));
    CHECK(apply_scaler(std::vector<double>{0, 5, 10}, st) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(code_of([] { (void)fit_scaler(TimeSeries({7, 7, 7})); }) == ErrorCode::zero_range);
    // Values outside the fitted range map outside [0, 1].
    CHECK_THAT(st.apply(20.0), WithinAbs(2.0, 1e-15));
}

TEST_CASE("scaler round trip property", "[series][scaler][property]") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto v = test_support::random_vector(rng, 2 + static_cast<std::size_t>(trial % 60));
        const auto st = fit_scaler(v);
        const auto scaled = apply_scaler(v, st);
        for (double x : scaled) REQUIRE((x >= 0.0 && x <= 1.0));
        REQUIRE(test_support::max_abs_diff(invert_scaler(scaled, st), v) <= 1e-12);
    }
}

TEST_CASE("window examples", "[series][windows]") {
    const auto w = make_windows(TimeSeries({1, 2, 3, 4, 5}), 2);
    CHECK(w.inputs == std::vector<std::vector<double>>{{1, 2}, {2, 3}, {3, 4}});
    CHECK(w.targets == std::vector<double>{3, 4, 5});
    CHECK(make_windows(TimeSeries({1, 2, 3, 4, 5}), 4).size() == 1);
    CHECK(make_windows(TimeSeries(std::vector<double>(144, 0.0)), 12).size() == 132);
    CHECK(code_of([] { (void)make_windows(TimeSeries({1, 2}), 2); }) == ErrorCode::degenerate_input);
    CHECK(code_of([] { (void)make_windows(TimeSeries({1, 2}), 0); }) == ErrorCode::bounds);
}

TEST_CASE("window count property", "[series][windows][property]") {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 150);
        const std::size_t L = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - 1));
        const auto v = test_support::random_vector(rng, n);
        const auto w = make_windows(v, L);
        REQUIRE(w.size() == n - L);
        for (std::size_t i = 0; i < w.size(); ++i) {
            REQUIRE(w.inputs[i].size() == L);
            REQUIRE(w.inputs[i].front() == v[i]);
            REQUIRE(w.inputs[i].back() == v[i + L - 1]);
            REQUIRE(w.targets[i] == v[i + L]);
        }
    }
}

TEST_CASE("train/test split", "[series][split]") {
    std::vector<double> v(156);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    const TimeSeries s(v, {2010, 1});
    const auto [train, test] = split_train_test(s, 12);
    CHECK(train.size() == 144);
    CHECK(train.end() == Period{2021, 12});
    CHECK(test.size() == 12);
    CHECK(test.start() == Period{2022, 1});
    CHECK(test.end() == Period{2022, 12});

    std::vector<double> joined = train.vector();
    joined.insert(joined.end(), test.vector().begin(), test.vector().end());
    CHECK(joined == v);

    CHECK(split_train_test(s, 155).first.size() == 1);
    CHECK(code_of([&] { (void)split_train_test(s, 0); }) == ErrorCode::bounds);
    CHECK(code_of([&] { (void)split_train_test(s, 156); }) == ErrorCode::bounds);
}

TEST_CASE("rng is reproducible", "[series][random]") {
    Rng a(11), b(11);
    for (int i = 0; i < 100; ++i) REQUIRE(a.normal() == b.normal());
}
