#include "ergomet/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergomet/util.hpp"

namespace ergomet {

namespace {

class MarkovSource final : public detail::SymbolSource {
public:
    MarkovSource(MarkovSample spec, int first_state)
        : SymbolSource(1), spec_(std::move(spec)), prev_(first_state) {}

protected:
    void extend(std::uint64_t upto) const override {
        auto& b = buf_[0];
        while (b.size() <= upto) {
            const std::uint64_t n = b.size();
            const double u = uniform_at(spec_.seed, 0, n);
            const std::vector<double>& dist =
                prev_ < 0 ? spec_.initial : spec_.transitions[static_cast<std::size_t>(prev_)];
            int s = static_cast<int>(dist.size()) - 1;
            double acc = 0.0;
            for (std::size_t a = 0; a + 1 < dist.size(); ++a) {
                acc += dist[a];
                if (u < acc) {
                    s = static_cast<int>(a);
                    break;
                }
            }
            b.push_back(s);
            prev_ = s;
        }
    }

private:
    MarkovSample spec_;
    mutable int prev_;
};

void check_symbols(const std::vector<int>& word, int alphabet) {
    for (int s : word)
        if (s < 0 || s >= alphabet) throw std::invalid_argument("symbol outside alphabet");
}

void check_rows(const std::vector<std::vector<double>>& rows, int alphabet) {
    if (static_cast<int>(rows.size()) != alphabet)
        throw std::invalid_argument("transition matrix size mismatch");
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != alphabet)
            throw std::invalid_argument("transition matrix size mismatch");
        const double s = std::accumulate(r.begin(), r.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("transition row must sum to 1");
        for (double p : r)
            if (p < 0.0 || p > 1.0) throw std::invalid_argument("transition entry out of [0,1]");
    }
}

}  // namespace

struct Point::Impl {
    int alphabet;
    std::vector<int> prefix;
    Generator gen;
    std::shared_ptr<detail::SymbolSource> source;  // for MarkovSample

    int at(std::uint64_t i) const {
        if (i < prefix.size()) return prefix[i];
        const std::uint64_t j = i - prefix.size();
        return std::visit(
            [&](const auto& g) -> int {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, PeriodicExtension>) {
                    return g.word[j % g.word.size()];
                } else if constexpr (std::is_same_v<G, ExplicitFinite>) {
                    return g.pad;
                } else if constexpr (std::is_same_v<G, MechanicalWord>) {
                    if (g.rational()) {
                        const long long n = static_cast<long long>(j);
                        auto fl = [&](long long m) {
                            long long q = (m * g.num) / g.den;
                            if ((m * g.num) % g.den < 0) --q;
                            return q;
                        };
                        return static_cast<int>(fl(n + 1) - fl(n));
                    }
                    const double n = static_cast<double>(j);
                    return static_cast<int>(std::floor((n + 1.0) * g.slope + g.intercept) -
                                            std::floor(n * g.slope + g.intercept));
                } else if constexpr (std::is_same_v<G, MarkovSample>) {
                    return source->get(0, j);
                } else {
                    return g.source->get(g.component, j);
                }
            },
            gen);
    }
};

Point::Point(Alphabet a, std::vector<int> prefix, Generator g) {
    check_symbols(prefix, a.size);
    auto impl = std::make_shared<Impl>();
    impl->alphabet = a.size;
    impl->prefix = std::move(prefix);
    if (auto* pe = std::get_if<PeriodicExtension>(&g)) {
        if (pe->word.empty()) throw std::invalid_argument("periodic word must be nonempty");
        check_symbols(pe->word, a.size);
    } else if (auto* ms = std::get_if<MarkovSample>(&g)) {
        check_rows(ms->transitions, a.size);
        if (static_cast<int>(ms->initial.size()) != a.size)
            throw std::invalid_argument("initial distribution size mismatch");
        // The chain continues from the last prefix symbol when there is one.
        const int first = impl->prefix.empty() ? -1 : impl->prefix.back();
        impl->source = std::make_shared<MarkovSource>(*ms, first);
    } else if (auto* mw = std::get_if<MechanicalWord>(&g)) {
        if (a.size != 2) throw std::invalid_argument("mechanical words use a binary alphabet");
        if (mw->rational()) {
            if (mw->num < 0 || mw->num > mw->den)
                throw std::invalid_argument("mechanical slope must lie in [0,1]");
        } else if (mw->slope < 0.0 || mw->slope > 1.0) {
            throw std::invalid_argument("mechanical slope must lie in [0,1]");
        }
    }
    impl->gen = std::move(g);
    impl_ = std::move(impl);
}

Point Point::periodic(Alphabet a, const std::vector<int>& word) {
    return Point(a, {}, PeriodicExtension{word});
}

Point Point::finite(Alphabet a, std::vector<int> word, int pad) {
    return Point(a, std::move(word), ExplicitFinite{pad});
}

Point Point::mechanical(double slope, double intercept) {
    MechanicalWord g;
    g.slope = slope;
    g.intercept = intercept;
    return Point(Alphabet(2), {}, g);
}

Point Point::mechanical_rational(long long num, long long den, double intercept) {
    if (den <= 0) throw std::invalid_argument("denominator must be positive");
    if (std::gcd(num, den) != 1) throw std::invalid_argument("slope must be in lowest terms");
    MechanicalWord g;
    g.slope = static_cast<double>(num) / static_cast<double>(den);
    g.intercept = intercept;
    g.num = num;
    g.den = den;
    return Point(Alphabet(2), {}, g);
}

int Point::alphabet_size() const { return impl_->alphabet; }

int Point::at(std::uint64_t i) const { return impl_->at(i + offset_); }

std::vector<int> Point::window(std::uint64_t start, std::uint64_t len) const {
    std::vector<int> out(len);
    for (std::uint64_t i = 0; i < len; ++i) out[i] = at(start + i);
    return out;
}

const std::vector<int>& Point::prefix() const { return impl_->prefix; }

const Generator& Point::generator() const { return impl_->gen; }

Point shift(const Point& p, std::uint64_t j) {
    Point q = p;
    q.offset_ += j;
    return q;
}

double cantor_distance(const Point& p, const Point& q, int resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    for (int i = 0; i < resolution; ++i)
        if (p.at(i) != q.at(i)) return std::ldexp(1.0, -i);
    return 0.0;
}

int hamming_cost(const Point& p, const Point& q) { return p.at(0) != q.at(0) ? 1 : 0; }

Subsequence Subsequence::all() {
    Subsequence s;
    s.rule_ = All{};
    return s;
}

Subsequence Subsequence::stride(std::uint64_t st) {
    if (st == 0) throw std::invalid_argument("stride must be positive");
    Subsequence s;
    s.rule_ = Stride{st};
    return s;
}

Subsequence Subsequence::geometric(double base) {
    if (!(base > 1.0)) throw std::invalid_argument("geometric base must exceed 1");
    Subsequence s;
    s.rule_ = Geometric{base};
    return s;
}

Subsequence Subsequence::explicit_list(std::vector<std::uint64_t> ns) {
    if (ns.empty()) throw std::invalid_argument("explicit subsequence must be nonempty");
    if (ns.front() < 1) throw std::invalid_argument("subsequence entries must be >= 1");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("subsequence must be strictly increasing");
    Subsequence s;
    s.rule_ = Explicit{std::move(ns)};
    return s;
}

std::vector<std::uint64_t> Subsequence::usable(std::uint64_t horizon) const {
    std::vector<std::uint64_t> out;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, All>) {
                out.reserve(horizon);
                for (std::uint64_t n = 1; n <= horizon; ++n) out.push_back(n);
            } else if constexpr (std::is_same_v<R, Stride>) {
                for (std::uint64_t n = r.s; n <= horizon; n += r.s) out.push_back(n);
            } else if constexpr (std::is_same_v<R, Geometric>) {
                std::uint64_t prev = 0;
                for (int k = 1;; ++k) {
                    const double v = std::pow(r.base, k);
                    if (v > static_cast<double>(horizon) + 0.5) break;
                    const auto n = std::max<std::uint64_t>(prev + 1,
                                                           static_cast<std::uint64_t>(std::floor(v)));
                    if (n > horizon) break;
                    out.push_back(n);
                    prev = n;
                }
            } else {
                for (std::uint64_t n : r.ns)
                    if (n <= horizon) out.push_back(n);
            }
        },
        rule_);
    return out;
}

std::string Subsequence::describe() const {
    return std::visit(
        [](const auto& r) -> std::string {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, All>) return "all";
            else if constexpr (std::is_same_v<R, Stride>) return "stride(" + std::to_string(r.s) + ")";
            else if constexpr (std::is_same_v<R, Geometric>) return "geometric(" + fmt_num(r.base) + ")";
            else return "explicit[" + std::to_string(r.ns.size()) + "]";
        },
        rule_);
}

}  // namespace ergomet
