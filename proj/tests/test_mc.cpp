#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <vector>

#include "jcir/chf.hpp"
#include "jcir/levy.hpp"
#include "jcir/mc.hpp"
#include "jcir/sim.hpp"

using namespace jcir;

namespace {

const chf::ModelParams kExpJump{
    1.0, 1.0, 1.0, levy::CompoundPoisson{0.5, levy::ExponentialLaw{2.0}}};

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("parallel fill matches the serial reference bit for bit") {
  // A draw with an input-dependent number of stream consumptions (jump
  // counts vary) is the hard case for partitioned-stream schemes.
  const auto draw = [](std::size_t, RandomStream& rs) {
    return sim::jcir_exact_oneshot(kExpJump, 1.3, 0.7, rs);
  };
  const std::size_t n = 4096;
  const auto serial = mc::fill_indexed_serial(n, 11, 100, draw);
  for (int threads : {1, 2, 3, 4, 8}) {
    const auto par = mc::fill_indexed(n, 11, 100, draw, threads);
    CHECK(bitwise_equal(serial, par));
  }
}

TEST_CASE("fill depends on seed and stream base, not on schedule") {
  const auto draw = [](std::size_t i, RandomStream& rs) {
    return rs.normal() + static_cast<double>(i % 7);
  };
  const auto a = mc::fill_indexed(1000, 5, 0, draw, 4);
  const auto b = mc::fill_indexed(1000, 5, 0, draw, 1);
  CHECK(bitwise_equal(a, b));
  const auto c = mc::fill_indexed(1000, 6, 0, draw, 4);
  CHECK(!bitwise_equal(a, c));
  const auto d = mc::fill_indexed(1000, 5, 1, draw, 4);
  CHECK(!bitwise_equal(a, d));
}

TEST_CASE("parallel transform matches serial") {
  const std::size_t n = 10000;
  std::vector<double> par(n), ser(n);
  const auto fn = [](std::size_t i) {
    double x = static_cast<double>(i) * 1e-3;
    return std::cos(x) * std::exp(-x);
  };
  mc::transform_indexed(n, par.data(), fn, 4);
  mc::transform_indexed_serial(n, ser.data(), fn);
  CHECK(bitwise_equal(par, ser));
}
