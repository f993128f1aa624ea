#include "emx/params.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "emx/errors.hpp"

namespace emx {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void check_size(const char* field, const Vec& v, Index expected) {
  if (v.size() != expected) {
    std::ostringstream os;
    os << field << " must have size " << expected << ", got " << v.size();
    throw ValidationError(os.str());
  }
}

void check_finite(const char* field, const Vec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << field << "[" << i << "] is not finite";
      throw ValidationError(os.str());
    }
  }
}

void check_lower(const char* field, const Vec& v, double bound, bool strict) {
  for (Index i = 0; i < v.size(); ++i) {
    bool ok = strict ? v[i] > bound : v[i] >= bound;
    if (!ok) {
      std::ostringstream os;
      os << field << "[" << i << "] must be " << (strict ? "> " : ">= ") << bound
         << ", got " << v[i];
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

void validate(const MarketParams& mp) {
  require(mp.m >= 1, "m must be >= 1");
  require(mp.n >= 1, "n must be >= 1");
  check_size("a", mp.a, mp.m);
  check_size("b", mp.b, mp.m);
  check_size("c", mp.c, mp.n);
  check_size("d", mp.d, mp.n);
  check_size("alpha", mp.alpha, mp.m);
  check_size("beta", mp.beta, mp.n);
  check_finite("a", mp.a);
  check_finite("c", mp.c);
  check_finite("b", mp.b);
  check_finite("d", mp.d);
  check_finite("alpha", mp.alpha);
  check_finite("beta", mp.beta);
  check_lower("b", mp.b, 0.0, false);
  check_lower("d", mp.d, 0.0, false);
  check_lower("alpha", mp.alpha, 0.0, true);
  check_lower("beta", mp.beta, 0.0, true);
  require(std::isfinite(mp.k_price) && mp.k_price >= 0.0, "k_price must be finite and >= 0");
  require(std::isfinite(mp.h_gain) && mp.h_gain >= 0.0, "h_gain must be finite and >= 0");
  require(std::isfinite(mp.lambda0), "lambda0 must be finite");
}

void validate(const MarketParams& mp, const MemorySpec& mem) {
  validate(mp);
  require(mem.p >= 0, "p must be >= 0");
  require(std::isfinite(mem.lag_step) && mem.lag_step > 0.0, "lag_step must be finite and > 0");
  const Index rows = mem.p + 1;
  if (mem.w_alpha.rows() != rows || mem.w_alpha.cols() != mp.m)
    throw ValidationError("w_alpha must be (p+1) x m");
  if (mem.w_beta.rows() != rows || mem.w_beta.cols() != mp.n)
    throw ValidationError("w_beta must be (p+1) x n");
  check_size("w_k", mem.w_k, rows);
  check_size("w_h", mem.w_h, rows);
  if (!mem.w_alpha.allFinite()) throw ValidationError("w_alpha has a non-finite entry");
  if (!mem.w_beta.allFinite()) throw ValidationError("w_beta has a non-finite entry");
  check_finite("w_k", mem.w_k);
  check_finite("w_h", mem.w_h);
}

void validate(const MarketParams& mp, const MarketState& s) {
  check_size("S", s.S, mp.m);
  check_size("D", s.D, mp.n);
  check_finite("S", s.S);
  check_finite("D", s.D);
  require(std::isfinite(s.E), "E must be finite");
  require(std::isfinite(s.lambda), "lambda must be finite");
}

MemorySpec MemorySpec::uniform(const MarketParams& mp, Index p, double lag_step) {
  MemorySpec mem;
  mem.p = p;
  mem.lag_step = lag_step;
  mem.w_alpha = mp.alpha.transpose().replicate(p + 1, 1);
  mem.w_beta = mp.beta.transpose().replicate(p + 1, 1);
  mem.w_k = Vec::Constant(p + 1, mp.k_price);
  mem.w_h = Vec::Constant(p + 1, mp.h_gain);
  return mem;
}

MemorySpec MemorySpec::split(const MarketParams& mp, Index p, double lag_step) {
  MemorySpec mem = uniform(mp, p, lag_step);
  const double share = 1.0 / static_cast<double>(p + 1);
  mem.w_alpha *= share;
  mem.w_beta *= share;
  mem.w_k *= share;
  mem.w_h *= share;
  return mem;
}

Vec marginal_cost(const MarketParams& mp, const Vec& S) {
  if (S.size() != mp.m) throw ValidationError("S must have size m");
  return mp.a + mp.b.cwiseProduct(S);
}

Vec marginal_benefit(const MarketParams& mp, const Vec& D) {
  if (D.size() != mp.n) throw ValidationError("D must have size n");
  return mp.c - mp.d.cwiseProduct(D);
}

bool is_constant_cost(const MarketParams& mp) {
  return mp.b.isZero(0.0) && mp.d.isZero(0.0);
}

bool all_finite(const MarketState& s) {
  return s.S.allFinite() && s.D.allFinite() && std::isfinite(s.E) &&
         std::isfinite(s.lambda) && std::isfinite(s.t);
}

namespace {

void hash_doubles(std::uint64_t& h, const double* data, Index count) {
  // FNV-1a over the raw bytes.
  for (Index i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof bits);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
}

}  // namespace

std::uint64_t fingerprint(const MarketParams& mp) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const double counts[2] = {static_cast<double>(mp.m), static_cast<double>(mp.n)};
  hash_doubles(h, counts, 2);
  for (const Vec* v : {&mp.a, &mp.b, &mp.c, &mp.d, &mp.alpha, &mp.beta})
    hash_doubles(h, v->data(), v->size());
  const double scalars[3] = {mp.k_price, mp.h_gain, mp.lambda0};
  hash_doubles(h, scalars, 3);
  return h;
}

}  // namespace emx
