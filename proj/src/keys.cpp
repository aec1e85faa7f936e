/*
 * Copyright 2026 The mvfhe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mvfhe/keys.hpp"

#include <utility>

#include "mvfhe/errors.hpp"
#include "mvfhe/linalg.hpp"

namespace mvfhe {

namespace {

Polynomial times_monomial(const Polynomial& f, const Monomial& m) {
  Polynomial out(f.num_vars(), f.modulus());
  for (const auto& [e, c] : f.terms()) out.add_term(e * m, c);
  return out;
}

MatrixZq evaluations(const std::vector<Polynomial>& fs, const std::vector<Point>& pts,
                     std::size_t count) {
  MatrixZq out(fs.size(), count);
  for (std::size_t k = 0; k < fs.size(); ++k)
    for (std::size_t i = 0; i < count; ++i) out(k, i) = eval(fs[k], pts[i]).value;
  return out;
}

MatrixZq columns(const MatrixZq& m, const std::vector<std::size_t>& idx) {
  MatrixZq out(m.rows(), idx.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(i, idx[j]);
  return out;
}

MatrixZq column_range(const MatrixZq& m, std::size_t begin, std::size_t end) {
  std::vector<std::size_t> idx;
  for (std::size_t j = begin; j < end; ++j) idx.push_back(j);
  return columns(m, idx);
}

// Columns 1..n and ell+1..t: the points that determine a product polynomial.
std::vector<std::size_t> extension_columns(const Params& p) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < p.n(); ++j) idx.push_back(j);
  for (std::size_t j = p.ell; j < p.t(); ++j) idx.push_back(j);
  return idx;
}

std::vector<Polynomial> multiples_of_g(const Polynomial& g, const std::vector<Monomial>& ms) {
  std::vector<Polynomial> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.push_back(times_monomial(g, m));
  return out;
}

Polynomial sample_generator(const Params& p, const Modulus& q, Rng& rng) {
  Polynomial g(p.v, q);
  const auto ms = enumerate_monomials(p.v, p.r_g);
  const Monomial lead = ms.back();
  for (const auto& m : ms) {
    if (m == lead) {
      g.add_term(m, 1);
    } else if (m.total_degree() == 0) {
      g.add_term(m, static_cast<std::int64_t>(1 + rng.uniform_below(q.value() - 1)));
    } else {
      g.add_term(m, rng.uniform_residue(q));
    }
  }
  return g;
}

Point sample_point(const Params& p, const Modulus& q, const Polynomial& g, Rng& rng,
                   int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    Point z(p.v);
    for (auto& x : z) x = rng.uniform_residue(q);
    if (eval(g, z).value != 0) return z;
  }
  throw ConstructionError("could not find a point where g does not vanish");
}

bool points_admissible(const Params& p, const Modulus& q, const Polynomial& g,
                       const std::vector<Point>& pts) {
  // Every vector of Z_q^ell is the evaluation of some polynomial of degree <= r.
  std::vector<Polynomial> monos;
  for (const auto& m : enumerate_monomials(p.v, p.r())) monos.push_back(Polynomial::monomial(m, 1, q));
  if (rank_mod_q(evaluations(monos, pts, p.ell), q) != p.ell) return false;
  // I_{<=r} evaluated at z_1..z_n spans Z_q^n.
  auto basis = multiples_of_g(g, enumerate_monomials(p.v, p.r_prime));
  if (rank_mod_q(evaluations(basis, pts, p.n()), q) != p.n()) return false;
  // I_{<=2r} evaluated at z_1..z_n, z_{ell+1}..z_t has full rank n1.
  auto big = multiples_of_g(g, enumerate_monomials(p.v, 2 * p.r() - p.r_g));
  MatrixZq f1 = evaluations(big, pts, p.t());
  return rank_mod_q(columns(f1, extension_columns(p)), q) == p.n1();
}

Rational dyadic(std::int64_t k, unsigned u) {
  Rational r(BigInt(static_cast<long>(k)), BigInt(1) << u);
  r.canonicalize();
  return r;
}

int128 add_mod(int128 a, int128 b, int128 p, int128 half) {
  int128 s = a + b;
  if (s > half) {
    s -= p;
  } else if (s <= half - p) {
    s += p;
  }
  return s;
}

}  // namespace

SecretKey assemble_secret_key(const Params& params, std::uint64_t key_id, Polynomial g,
                              std::vector<Point> points, MatrixZq R1, MatrixZq R2) {
  params.validate();
  const Modulus q = params.modulus();
  const std::size_t n = params.n(), ell = params.ell, t = params.t();
  if (!(g.modulus() == q) || g.num_vars() != params.v) {
    throw ParameterError("generator polynomial does not match the parameters");
  }
  if (g.degree() != static_cast<int>(params.r_g)) throw ParameterError("generator has the wrong degree");
  if (points.size() != t) throw DimensionError("secret key needs t evaluation points");
  for (const auto& z : points)
    if (z.size() != params.v) throw DimensionError("evaluation point has the wrong dimension");
  if (R1.rows() != n || R1.cols() != n) throw DimensionError("R1 must be n x n");
  if (R2.rows() != ell - n || R2.cols() != n) throw DimensionError("R2 must be (ell-n) x n");

  SecretKey sk{params, key_id, std::move(g), std::move(points), reduce_mod(R1, q),
               reduce_mod(R2, q), {}, {}, {}, {}, {}, {}, {}};
  for (const auto& m : enumerate_monomials(params.v, params.r_prime))
    sk.basis_h.push_back(Polynomial::monomial(m, 1, q));
  sk.E = evaluations(multiples_of_g(sk.g, enumerate_monomials(params.v, params.r_prime)),
                     sk.points, t);

  const MatrixZq e1 = column_range(sk.E, 0, n);
  const MatrixZq e2 = column_range(sk.E, n, ell);
  MatrixZq st = mul_mod(inverse_mod_q(e1, q), e2, q);  // S^T up to sign
  sk.S = MatrixZq(ell - n, n);
  for (std::size_t i = 0; i < ell - n; ++i)
    for (std::size_t j = 0; j < n; ++j) sk.S(i, j) = q.neg(st(j, i));

  sk.R = MatrixZq(ell, ell, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sk.R(i, j) = sk.R1(i, j);
  for (std::size_t i = 0; i < ell - n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sk.R(n + i, j) = sk.R2(i, j);
    sk.R(n + i, n + i) = 1;
  }
  sk.R_inv = inverse_mod_q(sk.R, q);

  sk.S_enc = MatrixZq(n, ell, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sk.S_enc(i, i) = 1;
    for (std::size_t j = 0; j < ell - n; ++j) sk.S_enc(i, n + j) = q.neg(sk.S(j, i));
  }
  MatrixZq s_i_t(ell, ell - n, 0);  // [S | I]^T
  for (std::size_t j = 0; j < ell - n; ++j) {
    for (std::size_t i = 0; i < n; ++i) s_i_t(i, j) = sk.S(j, i);
    s_i_t(n + j, j) = 1;
  }
  sk.S_dec = mul_mod(sk.R_inv, s_i_t, q);
  return sk;
}

SecretKey keygen(const Params& params, Rng& rng, const KeyGenOptions& options) {
  params.validate();
  const Modulus q = params.modulus();
  const std::size_t n = params.n(), ell = params.ell, t = params.t();
  const std::uint64_t key_id = rng.next();

  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Polynomial g = sample_generator(params, q, rng);
    std::vector<Point> pts;
    pts.reserve(t);
    for (std::size_t i = 0; i < t; ++i) pts.push_back(sample_point(params, q, g, rng, options.max_attempts));
    if (!points_admissible(params, q, g, pts)) continue;

    MatrixZq r1(n, n);
    bool full_rank = false;
    for (int a = 0; a < options.max_attempts && !full_rank; ++a) {
      for (auto& x : r1.data()) x = rng.uniform_residue(q);
      full_rank = rank_mod_q(r1, q) == n;
    }
    if (!full_rank) throw ConstructionError("could not sample an invertible R1");
    MatrixZq r2(ell - n, n, 0);
    if (options.dense_r2)
      for (auto& x : r2.data()) x = rng.uniform_residue(q);
    return assemble_secret_key(params, key_id, std::move(g), std::move(pts), std::move(r1),
                               std::move(r2));
  }
  throw ConstructionError("no admissible evaluation points after " +
                          std::to_string(options.max_attempts) + " attempts");
}

std::vector<Polynomial> build_G(const SecretKey& sk) {
  return multiples_of_g(sk.g, monomials_of_degree(sk.params.v, sk.params.r_prime + 1));
}

std::vector<Polynomial> ideal_basis(const SecretKey& sk) {
  const Params& p = sk.params;
  return multiples_of_g(sk.g, enumerate_monomials(p.v, 2 * p.r() - p.r_g));
}

MultiplicationMaps build_multiplication_maps(const SecretKey& sk, Rng& rng,
                                             const EvalKeyOptions& options) {
  const Params& p = sk.params;
  const Modulus q = p.modulus();
  const std::size_t n = p.n(), ell = p.ell, t = p.t(), n1 = p.n1();
  MultiplicationMaps maps;

  // Step 1: D_i = (R^-1 [[I, S^T], [0, I]] mod q) + [[0, eps_i], [0, 0]].
  {
    Rational limit = Rational(BigInt(static_cast<long>(p.B)) << p.u) /
                     Rational(BigInt(static_cast<unsigned long>(p.q)) * static_cast<unsigned long>(n));
    const BigInt ceil_limit = -round_floor(-limit);
    std::int64_t kmax = 0;
    if (!options.zero_eps && ceil_limit > 1) {
      const BigInt k = ceil_limit - 1;
      kmax = k.fits_slong_p() ? k.get_si() : INT64_MAX;
    }
    MatrixZq upper(ell, ell, 0);
    for (std::size_t i = 0; i < ell; ++i) upper(i, i) = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < ell - n; ++j) upper(i, n + j) = sk.S(j, i);
    const MatrixZq base = mul_mod(sk.R_inv, upper, q);
    for (MatrixQ* eps : {&maps.eps1, &maps.eps2}) {
      *eps = MatrixQ(n, ell - n, Rational(0));
      for (auto& x : eps->data()) x = dyadic(kmax ? rng.uniform_int(-kmax, kmax) : 0, p.u);
    }
    maps.D1 = to_rational(base);
    maps.D2 = maps.D1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < ell - n; ++j) {
        maps.D1(i, n + j) += maps.eps1(i, j);
        maps.D2(i, n + j) += maps.eps2(i, j);
      }
  }

  // Step 2: extend I_{<=r} evaluations from z_1..z_n to z_{ell+1}..z_t.
  {
    const MatrixZq alpha =
        mul_mod(inverse_mod_q(column_range(sk.E, 0, n), q), column_range(sk.E, ell, t), q);
    maps.A = MatrixZq(ell, t, 0);
    for (std::size_t i = 0; i < ell; ++i) maps.A(i, i) = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = ell; k < t; ++k) maps.A(i, k) = alpha(i, k - ell);
  }

  // Step 4: predict product evaluations at the message points.
  const std::vector<std::size_t> idx = extension_columns(p);
  const auto basis = ideal_basis(sk);
  maps.F1 = evaluations(basis, sk.points, t);
  const MatrixZq f1_ext = columns(maps.F1, idx);
  MatrixZq f1_ext_inv;
  try {
    f1_ext_inv = inverse_mod_q(f1_ext, q);
  } catch (const SingularMatrixError&) {
    throw ConstructionError("evaluations of I_{<=2r} at the extension points are singular");
  }
  const MatrixZq f1_msg = column_range(maps.F1, n, ell);
  const MatrixZq beta = mul_mod(f1_ext_inv, f1_msg, q);
  maps.B = MatrixZq::identity(t);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t j = 0; j < ell - n; ++j) maps.B(idx[a], n + j) = beta(a, j);

  // Step 5: reduction map I_{<=2r} -> I_{<=r} on evaluations.
  const auto G = build_G(sk);
  std::vector<Polynomial> reduced;
  reduced.reserve(basis.size());
  for (const auto& f : basis) reduced.push_back(reduce_by_set(f, G, static_cast<int>(p.r())));
  maps.F2 = evaluations(reduced, sk.points, ell);

  MatrixZq rhs = maps.F2;
  for (std::size_t k = 0; k < n1; ++k)
    for (std::size_t j = n; j < ell; ++j) rhs(k, j) = q.sub(rhs(k, j), maps.F1(k, j));
  const MatrixZq x = mul_mod(f1_ext_inv, rhs, q);
  maps.Q = MatrixZq(t, ell, 0);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t j = 0; j < ell; ++j) maps.Q(idx[a], j) = x(a, j);
  for (std::size_t j = n; j < ell; ++j) maps.Q(j, j) = 1;

  if (!(mul_mod(maps.F1, maps.Q, q) == reduce_mod(maps.F2, q))) {
    throw ConstructionError("post-check failed: F1 Q != F2 (mod q)");
  }
  maps.W = mul_mod(mul_mod(maps.B, maps.Q, q), sk.R, q);
  return maps;
}

Tensor3Q tensor_U(std::size_t n, std::size_t ell, std::size_t t, std::uint64_t q) {
  Tensor3Q u(t, t, t, Rational(0));
  Rational scaled(BigInt(2), BigInt(static_cast<unsigned long>(q)));
  scaled.canonicalize();
  for (std::size_t s = 0; s < t; ++s) u(s, s, s) = (s >= n && s < ell) ? scaled : Rational(1);
  return u;
}

Tensor3Q tensor_T(const Tensor3Q& U, const MatrixQ& A) {
  return n_mode_product(n_mode_product(U, A, 1), A, 2);
}

BigInt EvalKey::modulus() const {
  BigInt q = static_cast<unsigned long>(params.q);
  return (q * q) << (2 * params.u);
}

Rational EvalKey::entry(std::size_t a, std::size_t b, std::size_t k) const {
  Rational r(to_bigint(numerator(a, b, k)), denominator);
  r.canonicalize();
  return r;
}

EvalKey assemble_evalkey(const SecretKey& sk, const MultiplicationMaps& maps) {
  const Params& p = sk.params;
  const std::size_t n = p.n(), ell = p.ell, t = p.t();
  const BigInt qz = static_cast<unsigned long>(p.q);
  const BigInt pz = (qz * qz) << (2 * p.u);
  const int128 pm = to_int128(pz);
  const int128 half = pm / 2;

  // qT'(i, j, k) = sum_s q U_s A(i, s) A(j, s) W(s, k), reduced mod P.
  std::vector<int128> qt(ell * ell * ell);
  auto qt_at = [ell](std::size_t i, std::size_t j, std::size_t k) { return (i * ell + j) * ell + k; };
  {
    std::vector<BigInt> acc(ell * ell * ell);
    for (std::size_t s = 0; s < t; ++s) {
      const BigInt us = (s >= n && s < ell) ? BigInt(2) : qz;
      for (std::size_t i = 0; i < ell; ++i) {
        if (maps.A(i, s) == 0) continue;
        const BigInt ui = us * static_cast<long>(maps.A(i, s));
        for (std::size_t j = 0; j < ell; ++j) {
          if (maps.A(j, s) == 0) continue;
          const BigInt uij = ui * static_cast<long>(maps.A(j, s));
          for (std::size_t k = 0; k < ell; ++k) {
            if (maps.W(s, k) != 0) acc[qt_at(i, j, k)] += uij * static_cast<long>(maps.W(s, k));
          }
        }
      }
    }
    for (std::size_t x = 0; x < acc.size(); ++x) qt[x] = to_int128(balanced_rem(acc[x], pz));
  }

  EvalKey evk;
  evk.params = p;
  evk.key_id = sk.key_id;
  evk.gadget = p.gadget;

  if (p.gadget) {
    const std::size_t dim = p.gadget_dim();
    auto decompose = [&](const MatrixQ& d) {
      std::vector<std::uint8_t> out(dim * ell);  // [a][i]
      for (std::size_t i = 0; i < ell; ++i) {
        VectorQ col(ell);
        for (std::size_t r = 0; r < ell; ++r) col[r] = d(r, i);
        auto bits = bitdecomp(col, p.q, p.u);
        for (std::size_t a = 0; a < dim; ++a) out[a * ell + i] = bits[a];
      }
      return out;
    };
    const auto d1 = decompose(maps.D1);
    const auto d2 = decompose(maps.D2);
    // pm1[a][j][k] = sum_i D~1(a, i) qT'(i, j, k).
    std::vector<int128> pm1(dim * ell * ell, 0);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t i = 0; i < ell; ++i) {
        if (!d1[a * ell + i]) continue;
        int128* dst = &pm1[a * ell * ell];
        const int128* src = &qt[qt_at(i, 0, 0)];
        for (std::size_t jk = 0; jk < ell * ell; ++jk) dst[jk] = add_mod(dst[jk], src[jk], pm, half);
      }
    evk.dim = dim;
    evk.denominator = qz;
    evk.numerators.assign(ell * dim * dim, 0);
    for (std::size_t b = 0; b < dim; ++b)
      for (std::size_t j = 0; j < ell; ++j) {
        if (!d2[b * ell + j]) continue;
        for (std::size_t a = 0; a < dim; ++a) {
          const int128* src = &pm1[(a * ell + j) * ell];
          for (std::size_t k = 0; k < ell; ++k) {
            int128& dst = evk.numerators[(k * dim + a) * dim + b];
            dst = add_mod(dst, src[k], pm, half);
          }
        }
      }
    return evk;
  }

  // Plain variant: D^ = 2^u D is integral.
  auto scale = [&](const MatrixQ& d) {
    std::vector<BigInt> out(ell * ell);
    for (std::size_t a = 0; a < ell; ++a)
      for (std::size_t i = 0; i < ell; ++i) {
        Rational v = d(a, i) * Rational(BigInt(1) << p.u);
        if (v.get_den() != 1) throw ParameterError("D entries must be dyadic with u fractional bits");
        out[a * ell + i] = v.get_num();
      }
    return out;
  };
  const auto d1 = scale(maps.D1);
  const auto d2 = scale(maps.D2);
  std::vector<BigInt> pm1(ell * ell * ell, 0);
  for (std::size_t a = 0; a < ell; ++a)
    for (std::size_t i = 0; i < ell; ++i) {
      if (d1[a * ell + i] == 0) continue;
      for (std::size_t jk = 0; jk < ell * ell; ++jk)
        pm1[a * ell * ell + jk] += d1[a * ell + i] * to_bigint(qt[i * ell * ell + jk]);
    }
  for (auto& x : pm1) x = balanced_rem(x, pz);
  evk.dim = ell;
  evk.denominator = qz << (2 * p.u);
  evk.numerators.assign(ell * ell * ell, 0);
  for (std::size_t k = 0; k < ell; ++k)
    for (std::size_t a = 0; a < ell; ++a)
      for (std::size_t b = 0; b < ell; ++b) {
        BigInt acc = 0;
        for (std::size_t j = 0; j < ell; ++j) acc += d2[b * ell + j] * pm1[(a * ell + j) * ell + k];
        evk.numerators[(k * ell + a) * ell + b] = to_int128(balanced_rem(acc, pz));
      }
  return evk;
}

EvalKey build_evalkey(const SecretKey& sk, Rng& rng, const EvalKeyOptions& options) {
  return assemble_evalkey(sk, build_multiplication_maps(sk, rng, options));
}

std::vector<std::uint8_t> bitdecomp(const VectorQ& v, std::uint64_t q, unsigned u) {
  const Modulus mod(q);
  const std::size_t len = v.size();
  const unsigned width = u + mod.bit_length();
  const BigInt scale = BigInt(1) << u;
  const BigInt range = BigInt(static_cast<unsigned long>(q)) << u;
  std::vector<std::uint8_t> out(len * width, 0);
  for (std::size_t j = 0; j < len; ++j) {
    Rational x = v[j] * Rational(scale);
    if (x.get_den() != 1) throw ParameterError("BitDecomp input denominator does not divide 2^u");
    BigInt val;
    mpz_fdiv_r(val.get_mpz_t(), x.get_num_mpz_t(), range.get_mpz_t());
    for (unsigned k = 0; k < width; ++k) out[k * len + j] = mpz_tstbit(val.get_mpz_t(), k);
  }
  return out;
}

VectorZq powersoftwo_scaled(const VectorZq& w, std::uint64_t q, unsigned u) {
  const Modulus mod(q);
  const std::size_t len = w.size();
  const unsigned width = u + mod.bit_length();
  const int128 range = static_cast<int128>(q) << u;
  VectorZq out(len * width);
  for (std::size_t j = 0; j < len; ++j) {
    // 2^u * 2^(k-u) w = 2^k w, balanced mod q 2^u while k < u.
    int128 cur = static_cast<int128>(w[j]) % range;
    for (unsigned k = 0; k < width; ++k) {
      if (k > 0) cur = cur * 2 % range;
      if (k < u) {
        int128 r = cur < 0 ? cur + range : cur;
        if (2 * r > range) r -= range;
        out[k * len + j] = static_cast<std::int64_t>(r);
      } else {
        out[k * len + j] = mod.reduce(static_cast<int128>(w[j]) << (k - u)) << u;
      }
    }
  }
  return out;
}

VectorQ powersoftwo(const VectorZq& w, std::uint64_t q, unsigned u) {
  const VectorZq scaled = powersoftwo_scaled(w, q, u);
  VectorQ out(scaled.size());
  const BigInt den = BigInt(1) << u;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    out[i] = Rational(BigInt(static_cast<long>(scaled[i])), den);
    out[i].canonicalize();
  }
  return out;
}

}  // namespace mvfhe
