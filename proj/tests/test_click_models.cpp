#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ranktraffic/click_models.hpp"

using namespace ranktraffic;

TEST_CASE("model params validate their ranges") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.damping = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.page_size = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("zipf normalization accumulates the harmonic prefix") {
    const ZipfNorm z(4, 1.0);
    CHECK(z(1) == doctest::Approx(1.0));
    CHECK(z(2) == doctest::Approx(1.5));
    CHECK(z(4) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0 + 0.25));
}

TEST_CASE("surfing traffic is proportional to in-degree") {
    const std::vector<std::uint32_t> equal{1, 1, 1, 1};
    for (double t : surfing_traffic(equal)) CHECK(t == doctest::Approx(0.25));

    const std::vector<std::uint32_t> skew{3, 1};
    const std::vector<double> t = surfing_traffic(skew);
    CHECK(t[0] == doctest::Approx(0.75));
    CHECK(t[1] == doctest::Approx(0.25));
}

TEST_CASE("surfing traffic is permutation-equivariant") {
    const std::vector<std::uint32_t> k{5, 2, 9, 1};
    const std::vector<std::uint32_t> perm{9, 1, 5, 2};
    const std::vector<double> t = surfing_traffic(k);
    const std::vector<double> tp = surfing_traffic(perm);
    CHECK(tp[0] == doctest::Approx(t[2]));
    CHECK(tp[1] == doctest::Approx(t[3]));
    CHECK(tp[2] == doctest::Approx(t[0]));
    CHECK(tp[3] == doctest::Approx(t[1]));
}

TEST_CASE("surfing traffic rejects all-zero degrees") {
    const std::vector<std::uint32_t> zeros{0, 0, 0};
    CHECK_THROWS_AS(surfing_traffic(zeros), std::invalid_argument);
}

TEST_CASE("click probability from rank") {
    CHECK(click_prob_from_rank(1, 1, 1.63) == doctest::Approx(1.0));
    CHECK(click_prob_from_rank(2, 2, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(click_prob_from_rank(3, 2, 1.0), std::out_of_range);
    CHECK_THROWS_AS(click_prob_from_rank(0, 2, 1.0), std::out_of_range);

    for (std::size_t n : {1u, 7u, 100u}) {
        double sum = 0.0;
        for (std::size_t r = 1; r <= n; ++r) sum += click_prob_from_rank(r, n, 1.63);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("page size one reduces grouping to the plain click model") {
    for (std::size_t r = 1; r <= 17; ++r)
        CHECK(page_grouped_click_prob(r, 17, 1.63, 1) ==
              doctest::Approx(click_prob_from_rank(r, 17, 1.63)).epsilon(1e-12));
}

TEST_CASE("two result pages split mass as one to two to the minus alpha") {
    const double alpha = 1.63;
    const double first = page_grouped_click_prob(3, 20, alpha, 10);
    const double second = page_grouped_click_prob(13, 20, alpha, 10);
    // uniform inside a page
    CHECK(first == doctest::Approx(page_grouped_click_prob(8, 20, alpha, 10)));
    CHECK(first / second == doctest::Approx(std::pow(2.0, alpha)).epsilon(1e-12));
}

TEST_CASE("page-grouped mass is normalized, partial last page included") {
    for (std::size_t n : {5u, 20u, 23u}) {
        double sum = 0.0;
        for (std::size_t r = 1; r <= n; ++r)
            sum += page_grouped_click_prob(r, n, 1.63, 10);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("naive search traffic follows the composite exponent") {
    const std::vector<std::uint32_t> k{4, 1};
    const std::vector<double> t = naive_search_traffic(k, 1.63, 1.1);
    CHECK(t[0] / t[1] == doctest::Approx(std::pow(4.0, 1.63 * 1.1)).epsilon(1e-12));

    // alpha = beta = 1 reduces to surfing
    const std::vector<std::uint32_t> ks{5, 2, 9, 1};
    const std::vector<double> surf = surfing_traffic(ks);
    const std::vector<double> naive = naive_search_traffic(ks, 1.0, 1.0);
    for (std::size_t i = 0; i < ks.size(); ++i)
        CHECK(naive[i] == doctest::Approx(surf[i]).epsilon(1e-12));

    CHECK_THROWS_AS(naive_search_traffic(std::vector<std::uint32_t>{0, 0}, 1.63, 1.1),
                    std::invalid_argument);
}

TEST_CASE("naive search concentrates more mass on the top node than surfing") {
    const std::vector<std::uint32_t> k{50, 10, 5, 2, 1};
    const std::vector<double> surf = surfing_traffic(k);
    const std::vector<double> naive = naive_search_traffic(k, 1.63, 1.1);
    CHECK(naive[0] > surf[0]);
}

TEST_CASE("mixture interpolates between the two models") {
    const std::vector<double> surf{1.0, 0.0};
    const std::vector<double> search{0.0, 1.0};
    CHECK(mixture_traffic(surf, search, 1.0) == surf);
    CHECK(mixture_traffic(surf, search, 0.0) == search);
    const std::vector<double> mid = mixture_traffic(surf, search, 0.5);
    CHECK(mid[0] == doctest::Approx(0.5));
    CHECK(mid[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(mixture_traffic(surf, search, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(mixture_traffic(surf, search, -0.1), std::invalid_argument);
}

TEST_CASE("traffic vectors sum to one") {
    const std::vector<std::uint32_t> k{7, 3, 3, 1, 0, 12};
    for (const auto& t : {surfing_traffic(k), naive_search_traffic(k, 1.63, 1.1)}) {
        double sum = 0.0;
        for (double v : t) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}
