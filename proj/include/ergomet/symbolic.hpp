#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ergomet {

struct Alphabet {
    int size;
    explicit Alphabet(int s) : size(s) {
        if (s < 2) throw std::invalid_argument("alphabet size must be >= 2");
    }
};

namespace detail {

// Shared backing store for generators that must be sampled sequentially
// (Markov chains, coupled streams). Buffers grow on demand under a lock;
// the produced symbols are a pure function of the construction data.
class SymbolSource {
public:
    virtual ~SymbolSource() = default;

    int get(int component, std::uint64_t i) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto& b = buf_[static_cast<std::size_t>(component)];
        if (b.size() <= i) extend(i);
        return b[i];
    }

protected:
    explicit SymbolSource(int components) : buf_(components) {}
    // Must grow every component buffer past index `upto`. Called under mu_.
    virtual void extend(std::uint64_t upto) const = 0;

    mutable std::vector<std::vector<int>> buf_;
    mutable std::mutex mu_;
};

}  // namespace detail

// Generator rules. A Point is a finite prefix followed by symbols produced
// by one of these.
struct PeriodicExtension {
    std::vector<int> word;
};

struct ExplicitFinite {
    int pad = 0;
};

// s(n) = floor((n+1)*alpha + beta) - floor(n*alpha + beta), computed with
// integer arithmetic when the slope is given as a fraction.
struct MechanicalWord {
    double slope = 0.0;
    double intercept = 0.0;
    long long num = -1;  // rational slope num/den when den > 0
    long long den = 0;
    bool rational() const { return den > 0; }
};

struct MarkovSample {
    std::vector<std::vector<double>> transitions;
    std::vector<double> initial;
    std::uint64_t seed = 0;
};

// A component of a jointly sampled tuple (see orbit_metrics).
struct CoupledRef {
    std::shared_ptr<detail::SymbolSource> source;
    int component = 0;
    std::string description;  // opaque tag for reports
};

using Generator =
    std::variant<PeriodicExtension, ExplicitFinite, MechanicalWord, MarkovSample, CoupledRef>;

class Point {
public:
    Point(Alphabet a, std::vector<int> prefix, Generator g);

    static Point periodic(Alphabet a, const std::vector<int>& word);
    static Point finite(Alphabet a, std::vector<int> word, int pad = 0);
    static Point mechanical(double slope, double intercept = 0.0);
    static Point mechanical_rational(long long num, long long den, double intercept = 0.0);

    int alphabet_size() const;
    int at(std::uint64_t i) const;
    std::vector<int> window(std::uint64_t start, std::uint64_t len) const;

    std::uint64_t offset() const { return offset_; }
    const std::vector<int>& prefix() const;
    const Generator& generator() const;

    friend Point shift(const Point& p, std::uint64_t j);

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    std::uint64_t offset_ = 0;
};

Point shift(const Point& p, std::uint64_t j);

// 2^-m where m is the first index of disagreement; 0 when the points agree
// on [0, resolution).
double cantor_distance(const Point& p, const Point& q, int resolution = 64);

int hamming_cost(const Point& p, const Point& q);

// Strictly increasing index sequence n_1 < n_2 < ... used by the Besicovitch
// estimators and genericity checks.
class Subsequence {
public:
    static Subsequence all();                                   // n_k = k
    static Subsequence stride(std::uint64_t s);                 // n_k = s*k
    static Subsequence geometric(double base);                  // n_k ~ base^k
    static Subsequence explicit_list(std::vector<std::uint64_t> ns);

    // All n_k <= horizon, in increasing order.
    std::vector<std::uint64_t> usable(std::uint64_t horizon) const;

    std::string describe() const;

private:
    struct All {};
    struct Stride {
        std::uint64_t s;
    };
    struct Geometric {
        double base;
    };
    struct Explicit {
        std::vector<std::uint64_t> ns;
    };
    std::variant<All, Stride, Geometric, Explicit> rule_;
    Subsequence() = default;
};

}  // namespace ergomet
