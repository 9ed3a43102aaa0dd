#include "pjacobi/models.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

#include "pjacobi/error.hpp"
#include "pjacobi/random.hpp"

namespace pjacobi::models {

namespace {

OperatorData uniform(int dim, std::vector<std::int64_t> period, Complex a, double b) {
  OperatorData data;
  data.dim = dim;
  data.period = std::move(period);
  const auto cell = Geometry::torus(std::vector<std::int64_t>(dim, 1), data.period);
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const Site x = cell.site(i);
    for (int j = 1; j <= dim; ++j) data.hoppings[{x, j}] = a;
    data.potential[x] = b;
  }
  return data;
}

// Minimal recursive-descent reader for builtin names.
class NameParser {
 public:
  explicit NameParser(std::string_view text) : text_(text) {}

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  double number() {
    skip_space();
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::int64_t integer() {
    skip_space();
    std::int64_t value = 0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kInvalidArgument,
                "builtin model '" + std::string(text_) + "': " + why + " at offset " + std::to_string(pos_));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

OperatorData free_laplacian(int dim) {
  if (dim < 1) throw Error(ErrorKind::kInvalidArgument, "dimension must be positive");
  return uniform(dim, std::vector<std::int64_t>(dim, 1), 1.0, 0.0);
}

OperatorData ssh(double t1, double t2) {
  OperatorData data = uniform(1, {2}, 1.0, 0.0);
  data.hoppings[{{0}, 1}] = t1;
  data.hoppings[{{1}, 1}] = t2;
  return data;
}

OperatorData random_periodic(int dim, const std::vector<std::int64_t>& period, std::uint64_t seed) {
  if (dim < 1 || static_cast<int>(period.size()) != dim)
    throw Error(ErrorKind::kInvalidArgument, "random_periodic needs one period per axis");
  for (auto q : period)
    if (q < 1) throw Error(ErrorKind::kInvalidArgument, "periods must be positive");
  OperatorData data = uniform(dim, period, 1.0, 0.0);
  PortableRng rng(seed);
  const auto cell = Geometry::torus(std::vector<std::int64_t>(dim, 1), period);
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const Site x = cell.site(i);
    for (int j = 1; j <= dim; ++j) {
      const double modulus = rng.uniform(0.5, 1.5);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      data.hoppings[{x, j}] = std::polar(modulus, phase);
    }
    data.potential[x] = rng.uniform(-1.0, 1.0);
  }
  return data;
}

OperatorData builtin(std::string_view name) {
  NameParser p(name);
  const std::string id = p.identifier();
  if (id == "free1d" || id == "free2d") {
    p.finish();
    return free_laplacian(id == "free1d" ? 1 : 2);
  }
  if (id == "ssh") {
    p.expect('(');
    const double t1 = p.number();
    p.expect(',');
    const double t2 = p.number();
    p.expect(')');
    p.finish();
    return ssh(t1, t2);
  }
  if (id == "random_periodic") {
    p.expect('(');
    const auto dim = p.integer();
    p.expect(',');
    p.expect('[');
    std::vector<std::int64_t> period{p.integer()};
    while (p.accept(',')) period.push_back(p.integer());
    p.expect(']');
    std::uint64_t seed = 1;
    if (p.accept(',')) {
      const auto s = p.integer();
      if (s < 0) p.fail("seed must be non-negative");
      seed = static_cast<std::uint64_t>(s);
    }
    p.expect(')');
    p.finish();
    return random_periodic(static_cast<int>(dim), period, seed);
  }
  p.fail("unknown model '" + id + "'");
}

}  // namespace pjacobi::models
