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

#ifndef MVFHE_KEYS_HPP_
#define MVFHE_KEYS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvfhe/arith.hpp"
#include "mvfhe/matrix.hpp"
#include "mvfhe/mvpoly.hpp"
#include "mvfhe/params.hpp"

namespace mvfhe {

using Point = std::vector<std::int64_t>;

// Secret key. Only g, the points, R1 and R2 are independent; the remaining
// members are derived by assemble_secret_key.
struct SecretKey {
  Params params;
  std::uint64_t key_id = 0;
  Polynomial g;
  std::vector<Point> points;  // z_1..z_t
  MatrixZq R1;                // n x n
  MatrixZq R2;                // (ell-n) x n

  std::vector<Polynomial> basis_h;  // monomials of degree <= r'
  MatrixZq E;                       // n x t, E(k, i) = (g h_k)(z_i)
  MatrixZq S;                       // (ell-n) x n
  MatrixZq R, R_inv;                // ell x ell
  MatrixZq S_enc;                   // n x ell, [I | -S^T]
  MatrixZq S_dec;                   // ell x (ell-n), R^-1 [S | I]^T

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

// Derives every dependent member and checks the shapes and the rank of R1.
SecretKey assemble_secret_key(const Params& params, std::uint64_t key_id, Polynomial g,
                              std::vector<Point> points, MatrixZq R1, MatrixZq R2);

struct KeyGenOptions {
  // Random lower-left block R2. Multiplication does not decrypt correctly
  // with it; kept for experiments.
  bool dense_r2 = false;
  int max_attempts = 100;
};

SecretKey keygen(const Params& params, Rng& rng, const KeyGenOptions& options = {});

// g * m for every monomial m of degree r'+1, ascending by leading monomial.
std::vector<Polynomial> build_G(const SecretKey& sk);

// g * m for every monomial m of degree <= 2r - r_g: a basis of I_{<=2r}.
std::vector<Polynomial> ideal_basis(const SecretKey& sk);

// Every intermediate matrix of the multiplication key construction.
struct MultiplicationMaps {
  MatrixQ eps1, eps2;  // n x (ell-n), dyadic
  MatrixQ D1, D2;      // ell x ell
  MatrixZq A;          // ell x t
  MatrixZq B;          // t x t
  MatrixZq F1;         // n1 x t
  MatrixZq F2;         // n1 x ell
  MatrixZq Q;          // t x ell
  MatrixZq W;          // t x ell, B Q R mod q
};

struct EvalKeyOptions {
  // Force eps_1 = eps_2 = 0.
  bool zero_eps = false;
};

// Throws ConstructionError when F1 Q != F2 (mod q).
MultiplicationMaps build_multiplication_maps(const SecretKey& sk, Rng& rng,
                                             const EvalKeyOptions& options = {});

// Diagonal t x t x t tensor: 1 on slices 1..n and ell+1..t, 2/q on the
// message slices.
Tensor3Q tensor_U(std::size_t n, std::size_t ell, std::size_t t, std::uint64_t q);
// U x1 A x2 A.
Tensor3Q tensor_T(const Tensor3Q& U, const MatrixQ& A);

// Multiplication key M with entries numerator / denominator. Numerators are
// kept balanced modulo q^2 2^(2u), which leaves every product decryption
// unchanged. Layout [k][a][b].
struct EvalKey {
  Params params;
  std::uint64_t key_id = 0;
  bool gadget = true;
  std::size_t dim = 0;  // ell, or ell (u + log2 q) for the gadget variant
  BigInt denominator;   // q, or q 2^(2u) for the plain variant
  std::vector<int128> numerators;

  BigInt modulus() const;  // q^2 2^(2u)
  int128 numerator(std::size_t a, std::size_t b, std::size_t k) const {
    return numerators[(k * dim + a) * dim + b];
  }
  Rational entry(std::size_t a, std::size_t b, std::size_t k) const;

  friend bool operator==(const EvalKey&, const EvalKey&) = default;
};

// The variant (gadget or plain) follows sk.params.gadget.
EvalKey assemble_evalkey(const SecretKey& sk, const MultiplicationMaps& maps);
EvalKey build_evalkey(const SecretKey& sk, Rng& rng, const EvalKeyOptions& options = {});

// BitDecomp_{q,u}: entries must have denominators dividing 2^u. Output index
// k * len + j holds bit k of v_j 2^u mod q 2^u.
std::vector<std::uint8_t> bitdecomp(const VectorQ& v, std::uint64_t q, unsigned u);
// PowersOfTwo_{q,u}: entry k * len + j is 2^(k-u) w_j, its numerator reduced
// balanced mod q 2^u (k < u) or mod q (k >= u).
VectorQ powersoftwo(const VectorZq& w, std::uint64_t q, unsigned u);
// 2^u * PowersOfTwo(w), integral.
VectorZq powersoftwo_scaled(const VectorZq& w, std::uint64_t q, unsigned u);

}  // namespace mvfhe

#endif  // MVFHE_KEYS_HPP_
