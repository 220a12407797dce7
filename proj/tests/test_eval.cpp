#include <cmath>
#include <random>

#include "doctest.h"

#include "bulbar/error.hpp"
#include "bulbar/eval/friedman.hpp"
#include "bulbar/eval/loso.hpp"
#include "bulbar/eval/metrics.hpp"
#include "bulbar/eval/parallel.hpp"
#include "support/oracles.hpp"
#include "support/reference_values.hpp"

using namespace bulbar;
using namespace bulbar::eval;
namespace ref = bulbar::testing::reference;

namespace {

template <std::size_t C, std::size_t R>
std::vector<std::vector<double>> table(const std::array<std::array<double, C>, R>& a) {
    std::vector<std::vector<double>> out;
    for (const auto& row : a) out.emplace_back(row.begin(), row.end());
    return out;
}

/// Subjects s0..s{n-1}, reps rows each, features N(0,1); target from fn.
template <class Fn>
Dataset synthetic(int subjects, int reps, int cols, std::uint64_t seed, Fn target) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Dataset d;
    d.x.resize(subjects * reps, cols);
    d.y.resize(subjects * reps);
    for (int s = 0; s < subjects; ++s) {
        d.subject_ids.push_back("s" + std::to_string(s));
        d.subject_groups.push_back(s % 2 ? Group::ALS : Group::HC);
        for (int r = 0; r < reps; ++r) {
            const int row = s * reps + r;
            for (int c = 0; c < cols; ++c) d.x(row, c) = n(rng);
            d.y(row) = target(d.x.row(row), rng);
            d.subject_of_row.push_back(s);
            d.repetition.push_back(r + 2);
        }
    }
    return d;
}

FoldResult fold_with(std::string id, Group g, std::vector<std::pair<double, double>> pairs) {
    FoldResult f;
    f.subject_id = std::move(id);
    f.group = g;
    int rep = 2;
    for (auto [t, p] : pairs) f.predictions.push_back({rep++, t, p});
    return f;
}

}  // namespace

TEST_CASE("chi-square upper tail") {
    for (const auto& c : ref::kChiSquare) {
        CAPTURE(c.x);
        CAPTURE(c.df);
        CHECK(std::abs(chi_square_sf(c.x, c.df) - c.sf) <= 1e-8);
    }
    for (int df = 2; df <= 16; df += 2) {
        for (double x : {0.1, 1.0, 3.0, 8.0, 20.0, 60.0}) {
            CHECK(chi_square_sf(x, df) == doctest::Approx(testing::chi_square_sf_even_df(x, df)).epsilon(1e-10));
        }
    }
    for (int df : {1, 3, 8}) {
        CHECK(chi_square_sf(0.0, df) == 1.0);
        double prev = 1.0;
        for (double x = 0.25; x < 50.0; x += 0.25) {
            const double p = chi_square_sf(x, df);
            CHECK(p <= prev);
            CHECK(p >= 0.0);
            prev = p;
        }
    }
    CHECK_THROWS_AS(chi_square_sf(-1.0, 3), ValidationError);
    CHECK_THROWS_AS(chi_square_sf(1.0, 0), ValidationError);
    CHECK_THROWS_AS(chi_square_sf(std::nan(""), 2), ValidationError);
}

TEST_CASE("friedman") {
    SUBCASE("consistent ordering over two blocks") {
        const auto r = friedman_test({{1, 2, 3}, {1, 2, 3}});
        CHECK(r.chi2 == doctest::Approx(4.0));
        CHECK(r.df == 2);
        CHECK(r.p == doctest::Approx(std::exp(-2.0)));
    }
    SUBCASE("identical treatments") {
        const auto r = friedman_test({{0.5, 0.5, 0.5}, {0.7, 0.7, 0.7}, {0.2, 0.2, 0.2}});
        CHECK(r.chi2 == 0.0);
        CHECK(r.p == 1.0);
    }
    SUBCASE("ties against the reference") {
        const auto r = friedman_test(table(ref::kFriedmanTied));
        CHECK(r.chi2 == doctest::Approx(ref::kFriedmanTiedChi2).epsilon(1e-12));
        CHECK(r.p == doctest::Approx(ref::kFriedmanTiedP).epsilon(1e-9));
        CHECK(r.df == 3);
    }
    SUBCASE("nine treatments against the reference") {
        const auto r = friedman_test(table(ref::kFriedmanNine));
        CHECK(r.df == 8);
        CHECK(r.chi2 == doctest::Approx(ref::kFriedmanNineChi2).epsilon(1e-12));
        CHECK(r.p == doctest::Approx(ref::kFriedmanNineP).epsilon(1e-9));
    }
    SUBCASE("invariant under a per-block monotone transform") {
        auto t = table(ref::kFriedmanNine);
        const auto base = friedman_test(t);
        for (std::size_t b = 0; b < t.size(); ++b) {
            for (double& v : t[b]) v = std::exp(v) * static_cast<double>(b + 1) + 3.0;
        }
        const auto moved = friedman_test(t);
        CHECK(moved.chi2 == doctest::Approx(base.chi2).epsilon(1e-12));
        CHECK(moved.p == doctest::Approx(base.p).epsilon(1e-12));
    }
    SUBCASE("mid-ranks") {
        CHECK(mid_ranks({3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
        CHECK(mid_ranks({5, 5, 5}) == std::vector<double>{2, 2, 2});
    }
    SUBCASE("malformed tables") {
        CHECK_THROWS_AS(friedman_test({{1, 2, 3}}), ValidationError);
        CHECK_THROWS_AS(friedman_test({{1}, {2}}), ValidationError);
        CHECK_THROWS_AS(friedman_test({{1, 2, 3}, {1, 2}}), ValidationError);
        CHECK_THROWS_AS(friedman_test({{1, 2}, {1, std::nan("")}}), ValidationError);
    }
}

TEST_CASE("metrics") {
    using Pairs = std::vector<std::pair<double, double>>;
    CHECK(subject_rmse(Pairs{{3.0, 1.0}, {3.0, 5.0}}) == doctest::Approx(2.0));
    CHECK(subject_rmse(Pairs{{10.0, 10.0}}) == 0.0);
    CHECK_THROWS_AS(subject_rmse(Pairs{}), ValidationError);

    CHECK(coefficient_of_variation({1.0, 1.0}) == 0.0);
    CHECK(*coefficient_of_variation({1.0, 2.0}) == doctest::Approx(ref::kCvOneTwo).epsilon(1e-12));
    CHECK_FALSE(coefficient_of_variation({1.0}).has_value());
    CHECK_FALSE(coefficient_of_variation({1.0, -1.0}).has_value());

    SUBCASE("two subjects") {
        const auto r = aggregate_metrics({fold_with("a", Group::ALS, {{5, 4}}), fold_with("b", Group::HC, {{5, 7}})},
                                         Modality::Audio, models::ModelFamily::Svr);
        CHECK(r.mrmse == doctest::Approx(1.5));
        CHECK(*r.mrmse_als == 1.0);
        CHECK(*r.mrmse_hc == 2.0);
        CHECK_FALSE(r.cv_als.has_value());
        CHECK_FALSE(r.cv_hc.has_value());
        REQUIRE(r.subjects.size() == 2);
        CHECK(r.subjects[1].n_reps == 1);
    }
    SUBCASE("subjects are weighted equally regardless of repetition count") {
        const auto r = aggregate_metrics(
            {fold_with("a", Group::ALS, {{5, 4}}), fold_with("b", Group::ALS, {{5, 8}, {5, 2}, {5, 8}})},
            Modality::Video, models::ModelFamily::Gbt);
        CHECK(r.mrmse == doctest::Approx(2.0));
        CHECK(*r.cv_als == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
        CHECK_FALSE(r.mrmse_hc.has_value());
    }
    CHECK_THROWS_AS(aggregate_metrics({}, Modality::Audio, models::ModelFamily::Svr), ValidationError);
}

TEST_CASE("task seeds") {
    CHECK(task_seed(1, 2, 3, 4) == task_seed(1, 2, 3, 4));
    CHECK(task_seed(1, 2, 3, 4) != task_seed(1, 3, 2, 4));
    CHECK(task_seed(0, 0, 0, 0) != task_seed(1, 0, 0, 0));
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw TrainingError("x"); }), TrainingError);
}

TEST_CASE("nested LOSO") {
    const std::vector<models::ModelSpec> svr_grid{
        models::SvrSpec{10.0, 0.1, models::Kernel::Linear},
        models::SvrSpec{10.0, 0.1, models::Kernel::Rbf},
        models::SvrSpec{10.0, 0.1, models::Kernel::Sigmoid},
    };
    const auto linear = [](const Eigen::RowVectorXd& x, std::mt19937_64& rng) {
        return 10.0 + 2.0 * x(1) + std::normal_distribution<double>(0.0, 0.05)(rng);
    };

    SUBCASE("one fold per subject, predictions on held-out rows only") {
        const Dataset d = synthetic(5, 4, 3, 1, linear);
        const auto folds = nested_loso(d, svr_grid, {.seed = 3, .threads = 2});
        REQUIRE(folds.size() == 5);
        for (std::size_t f = 0; f < 5; ++f) {
            CHECK(folds[f].subject_id == d.subject_ids[f]);
            CHECK(folds[f].group == d.subject_groups[f]);
            REQUIRE(folds[f].predictions.size() == 4);
            for (std::size_t r = 0; r < 4; ++r) {
                const auto row = static_cast<Eigen::Index>(f * 4 + r);
                CHECK(folds[f].predictions[r].repetition == d.repetition[static_cast<std::size_t>(row)]);
                CHECK(folds[f].predictions[r].y_true == d.y(row));
            }
            CHECK(folds[f].inner_scores.size() == 3);
            CHECK(folds[f].inner_score == folds[f].inner_scores[folds[f].chosen_index]);
            for (double s : folds[f].inner_scores) CHECK(folds[f].inner_score <= s);
        }
    }

    SUBCASE("linear signal selects the linear kernel") {
        const Dataset d = synthetic(8, 6, 5, 2, linear);
        const auto folds = nested_loso(d, svr_grid, {.seed = 1, .threads = 0});
        int linear_wins = 0;
        for (const auto& f : folds) linear_wins += f.chosen_index == 0;
        CHECK(linear_wins >= 7);
        const auto report = aggregate_metrics(folds, Modality::Audio, models::ModelFamily::Svr);
        CHECK(report.mrmse < 0.3);
    }

    SUBCASE("held-out subject never influences its own fold") {
        const std::vector<models::ModelSpec> grid{
            models::SvrSpec{1.0, 0.1, models::Kernel::Rbf},
            models::GbtSpec{3, 3, 0.3, 0.7, 0.7},
            models::MlpSpec{{10, 5}, 0.01, models::Activation::Tanh},
        };
        const Dataset d = synthetic(5, 5, 4, 3, linear);
        const auto base = nested_loso(d, grid, {.seed = 9, .threads = 3});
        for (int held : {0, 3}) {
            Dataset perturbed = d;
            for (Eigen::Index r : perturbed.rows_of(held)) {
                perturbed.x.row(r) *= 50.0;
                perturbed.y(r) = -1000.0;
            }
            const auto moved = nested_loso(perturbed, grid, {.seed = 9, .threads = 3});
            const auto& a = base[static_cast<std::size_t>(held)];
            const auto& b = moved[static_cast<std::size_t>(held)];
            CHECK(a.standardizer == b.standardizer);
            CHECK(a.chosen_index == b.chosen_index);
            CHECK(a.inner_scores == b.inner_scores);
        }
    }

    SUBCASE("thread count does not change results") {
        const std::vector<models::ModelSpec> grid{
            models::GbtSpec{4, 3, 0.3, 0.5, 0.7},
            models::MlpSpec{{10, 5}, 0.01, models::Activation::Relu},
            models::SvrSpec{10.0, 0.5, models::Kernel::Rbf},
        };
        const Dataset d = synthetic(4, 5, 3, 4, linear);
        const auto one = nested_loso(d, grid, {.seed = 5, .threads = 1});
        const auto many = nested_loso(d, grid, {.seed = 5, .threads = 6});
        for (std::size_t f = 0; f < one.size(); ++f) {
            CHECK(one[f].chosen_index == many[f].chosen_index);
            CHECK(one[f].inner_scores == many[f].inner_scores);
            for (std::size_t r = 0; r < one[f].predictions.size(); ++r) {
                CHECK(one[f].predictions[r].y_pred == many[f].predictions[r].y_pred);
            }
        }
    }

    SUBCASE("too few subjects or no specs") {
        CHECK_THROWS_AS(nested_loso(synthetic(2, 4, 3, 1, linear), svr_grid), ValidationError);
        CHECK_THROWS_AS(nested_loso(synthetic(3, 4, 3, 1, linear), {}), ValidationError);
    }
}

TEST_CASE("dataset from instances") {
    std::vector<Instance> inst;
    for (int s = 0; s < 3; ++s) {
        for (int r = 2; r <= 3; ++r) {
            Instance i;
            i.subject_id = "p" + std::to_string(2 - s);
            i.group = s == 0 ? Group::ALS : Group::HC;
            i.repetition = r;
            i.audio = AudioFeatures{};
            i.video = VideoFeatures{};
            (*i.audio)[0] = s * 10 + r;
            (*i.video)[14] = -r;
            i.target = 20.0 + s;
            inst.push_back(i);
        }
    }
    const Dataset d = make_dataset(inst, Modality::Multimodal);
    CHECK(d.x.rows() == 6);
    CHECK(d.x.cols() == 33);
    CHECK(d.subject_ids == std::vector<std::string>{"p2", "p1", "p0"});
    CHECK(d.subject_groups[0] == Group::ALS);
    CHECK(d.x(3, 0) == 13.0);
    CHECK(d.x(3, 32) == -3.0);
    CHECK(d.y(5) == 22.0);
    CHECK(d.rows_of(1) == std::vector<Eigen::Index>{2, 3});
    CHECK(make_dataset(inst, Modality::Video).x.cols() == 15);
}
