#include "ranktraffic/click_models.hpp"

#include <cmath>
#include <stdexcept>

namespace ranktraffic {

void ModelParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(alpha) || !positive(beta) || !positive(mu) || !positive(delta))
        throw std::invalid_argument("ModelParams: exponents must be finite and positive");
    if (!(damping > 0.0 && damping < 1.0))
        throw std::invalid_argument("ModelParams: damping must be in (0,1)");
    if (page_size < 1)
        throw std::invalid_argument("ModelParams: page_size must be >= 1");
}

ZipfNorm::ZipfNorm(std::size_t max_n, double alpha) {
    prefix_.resize(max_n + 1);
    prefix_[0] = 0.0;
    for (std::size_t m = 1; m <= max_n; ++m)
        prefix_[m] = prefix_[m - 1] + std::pow(static_cast<double>(m), -alpha);
}

std::vector<double> surfing_traffic(std::span<const std::uint32_t> in_degrees) {
    double total = 0.0;
    for (std::uint32_t k : in_degrees) total += static_cast<double>(k);
    if (total == 0.0)
        throw std::invalid_argument("surfing_traffic: all in-degrees are zero");
    std::vector<double> t(in_degrees.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = static_cast<double>(in_degrees[i]) / total;
    return t;
}

double click_prob_from_rank(std::size_t r, std::size_t n, double alpha) {
    if (r < 1 || r > n)
        throw std::out_of_range("click_prob_from_rank: rank outside [1, n]");
    ZipfNorm z(n, alpha);
    return std::pow(static_cast<double>(r), -alpha) / z(n);
}

double page_grouped_click_prob(std::size_t r, std::size_t n, double alpha,
                               int page_size) {
    if (page_size < 1)
        throw std::invalid_argument("page_grouped_click_prob: page_size must be >= 1");
    if (r < 1 || r > n)
        throw std::out_of_range("page_grouped_click_prob: rank outside [1, n]");
    const std::size_t ps = static_cast<std::size_t>(page_size);
    const std::size_t pages = (n + ps - 1) / ps;
    ZipfNorm z(pages, alpha);
    const std::size_t page = (r - 1) / ps + 1;
    const std::size_t hits_on_page = page < pages ? ps : n - (pages - 1) * ps;
    const double page_mass = std::pow(static_cast<double>(page), -alpha) / z(pages);
    return page_mass / static_cast<double>(hits_on_page);
}

std::vector<double> naive_search_traffic(std::span<const std::uint32_t> in_degrees,
                                         double alpha, double beta) {
    const double gamma = alpha * beta;
    std::vector<double> t(in_degrees.size());
    double total = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = std::pow(static_cast<double>(in_degrees[i]), gamma);
        total += t[i];
    }
    if (total == 0.0)
        throw std::invalid_argument("naive_search_traffic: all in-degrees are zero");
    for (double& v : t) v /= total;
    return t;
}

std::vector<double> mixture_traffic(std::span<const double> surf,
                                    std::span<const double> search, double lambda) {
    if (surf.size() != search.size())
        throw std::invalid_argument("mixture_traffic: size mismatch");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("mixture_traffic: lambda outside [0,1]");
    std::vector<double> t(surf.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = lambda * surf[i] + (1.0 - lambda) * search[i];
    return t;
}

}  // namespace ranktraffic
