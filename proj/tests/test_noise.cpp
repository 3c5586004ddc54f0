#include <doctest.h>

#include "reqsim/noise.hpp"
#include "reqsim/kernels.hpp"
#include "test_util.hpp"

using namespace reqsim;
using testutil::max_abs_diff;

TEST_CASE("global depolarizing endpoints") {
  const DensityMatrix zero = DensityMatrix::zero_state(2);
  CHECK(max_abs_diff(apply_global_depolarizing(zero, 0.0).mat, zero.mat) == 0.0);
  const DensityMatrix mixed = apply_global_depolarizing(zero, 1.0);
  CHECK(max_abs_diff(mixed.mat, 0.25 * ComplexMatrix::Identity(4, 4)) < 1e-15);
}

TEST_CASE("global depolarizing at one half on |0><0|") {
  const DensityMatrix rho = apply_global_depolarizing(DensityMatrix::zero_state(1), 0.5);
  CHECK(rho.mat(0, 0).real() == doctest::Approx(0.75));
  CHECK(rho.mat(1, 1).real() == doctest::Approx(0.25));
}

TEST_CASE("global depolarizing rejects out-of-range rates") {
  CHECK_THROWS_AS(apply_global_depolarizing(DensityMatrix::zero_state(1), 1.5),
                  std::invalid_argument);
}

TEST_CASE("repeated global depolarizing equals the closed-form mixture") {
  Rng rng(3);
  const DensityMatrix rho = testutil::random_density(3, rng);
  const double delta = 0.07;
  const int p = 9;
  DensityMatrix repeated = rho;
  for (int i = 0; i < p; ++i) repeated = apply_global_depolarizing(repeated, delta);
  const double weight = std::pow(1.0 - delta, p);
  const ComplexMatrix closed =
      weight * rho.mat + (1.0 - weight) / 8.0 * ComplexMatrix::Identity(8, 8);
  CHECK(max_abs_diff(repeated.mat, closed) < 1e-10);
}

TEST_CASE("apply_kraus bit flip with probability one") {
  const DensityMatrix out =
      apply_kraus(DensityMatrix::zero_state(1), KrausChannel::bit_flip(1.0), {0});
  CHECK(out.mat(1, 1).real() == doctest::Approx(1.0));
  CHECK(std::abs(out.mat(0, 0)) < 1e-15);
}

TEST_CASE("apply_kraus identity channel is a no-op") {
  Rng rng(5);
  const DensityMatrix rho = testutil::random_density(2, rng);
  const DensityMatrix out = apply_kraus(rho, KrausChannel::identity(1), {1});
  CHECK(max_abs_diff(out.mat, rho.mat) < 1e-14);
}

TEST_CASE("apply_kraus single-qubit depolarizing hand value") {
  const DensityMatrix out =
      apply_kraus(DensityMatrix::zero_state(1), KrausChannel::depolarizing_1q(0.4), {0});
  CHECK(out.mat(0, 0).real() == doctest::Approx(0.8));
  CHECK(out.mat(1, 1).real() == doctest::Approx(0.2));
}

TEST_CASE("apply_kraus rejects incomplete channels") {
  KrausChannel broken;
  broken.arity = 1;
  broken.ops.push_back(0.5 * ComplexMatrix::Identity(2, 2));
  CHECK_THROWS_AS(apply_kraus(DensityMatrix::zero_state(1), broken, {0}),
                  std::invalid_argument);
}

TEST_CASE("apply_kraus preserves trace and positivity on random states") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = testutil::random_density(3, rng);
    for (const KrausChannel& ch :
         {KrausChannel::depolarizing_1q(0.3), KrausChannel::dephasing(0.4),
          KrausChannel::amplitude_damping(0.25), KrausChannel::bit_flip(0.2)}) {
      const DensityMatrix out = apply_kraus(rho, ch, {1});
      CHECK(out.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(hermiticity_deviation(out.mat) < 1e-9);
      CHECK(min_eigenvalue(out.mat) > -1e-8);
    }
    const DensityMatrix out2 = apply_kraus(rho, KrausChannel::depolarizing_2q(0.2), {0, 2});
    CHECK(out2.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(min_eigenvalue(out2.mat) > -1e-8);
  }
}

TEST_CASE("closed-form depolarizing kernels match their Kraus forms") {
  Rng rng(11);
  const DensityMatrix rho = testutil::random_density(3, rng);
  for (double p : {0.0, 0.05, 0.9}) {
    DensityMatrix fast = rho;
    apply_depolarizing_1q(fast.mat, 3, 1, p);
    const DensityMatrix slow = apply_kraus(rho, KrausChannel::depolarizing_1q(p), {1});
    CHECK(max_abs_diff(fast.mat, slow.mat) < 1e-13);
  }
  for (double p : {0.04, 0.5}) {
    DensityMatrix fast = rho;
    apply_depolarizing_2q(fast.mat, 3, 0, 2, p);
    const DensityMatrix slow = apply_kraus(rho, KrausChannel::depolarizing_2q(p), {0, 2});
    CHECK(max_abs_diff(fast.mat, slow.mat) < 1e-13);
  }
}

TEST_CASE("fused dephasing pass matches per-qubit Kraus dephasing") {
  Rng rng(13);
  const DensityMatrix rho = testutil::random_density(3, rng);
  const double p = 0.12;
  DensityMatrix fast = rho;
  apply_dephasing_set(fast.mat, 3, {0, 2}, p);
  DensityMatrix slow = apply_kraus(rho, KrausChannel::dephasing(p), {0});
  slow = apply_kraus(slow, KrausChannel::dephasing(p), {2});
  CHECK(max_abs_diff(fast.mat, slow.mat) < 1e-13);
}

TEST_CASE("apply_reset basics") {
  const DensityMatrix mixed(0.5 * ComplexMatrix::Identity(2, 2), 1);
  const DensityMatrix out = apply_reset(mixed, {0}, 0.0);
  CHECK(out.mat(0, 0).real() == doctest::Approx(1.0));

  // Reset with error keeps the configured flip weight.
  const DensityMatrix noisy = apply_reset(mixed, {0}, 0.1);
  CHECK(noisy.mat(0, 0).real() == doctest::Approx(0.9));
  CHECK(noisy.mat(1, 1).real() == doctest::Approx(0.1));
}

TEST_CASE("apply_reset on a product state leaves the other factor") {
  Rng rng(17);
  const DensityMatrix a = testutil::random_density(1, rng);
  const DensityMatrix b = testutil::random_density(1, rng);
  const DensityMatrix joint(tensor_product(a.mat, b.mat), 2);
  const DensityMatrix out = apply_reset(joint, {1}, 0.0);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(max_abs_diff(out.mat, tensor_product(a.mat, zero)) < 1e-13);
}

TEST_CASE("apply_reset of one Bell qubit yields |0><0| x I/2") {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::from_statevector(bell);
  const DensityMatrix out = apply_reset(rho, {0}, 0.0);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(max_abs_diff(out.mat, tensor_product(zero, (0.5 * ComplexMatrix::Identity(2, 2)).eval()))
        < 1e-13);
}

TEST_CASE("apply_reset is idempotent at zero error") {
  Rng rng(19);
  const DensityMatrix rho = testutil::random_density(3, rng);
  const DensityMatrix once = apply_reset(rho, {1, 2}, 0.0);
  const DensityMatrix twice = apply_reset(once, {1, 2}, 0.0);
  CHECK(max_abs_diff(once.mat, twice.mat) < 1e-14);
}

TEST_CASE("apply_reset rejects bad indices") {
  CHECK_THROWS_AS(apply_reset(DensityMatrix::zero_state(2), {3}, 0.0), std::out_of_range);
}

TEST_CASE("idling assignment covers exactly the untouched qubits") {
  NoiseModel noise = NoiseModel::local_default();

  Layer full;
  full.ops.push_back(make_xx(0, 1, 0.3));
  full.ops.push_back(make_rz(2, 0.1));
  CHECK(idling_channels_for_layer(full, 3, noise).empty());

  Layer partial;
  partial.ops.push_back(make_rz(0, 0.1));
  const auto idle = idling_channels_for_layer(partial, 3, noise);
  REQUIRE(idle.size() == 2);
  CHECK(idle[0].qubit == 1);
  CHECK(idle[1].qubit == 2);
  CHECK(idle[0].dephasing == noise.idle_dephasing);

  Layer masked = partial;
  masked.idle_suppressed = {1};
  const auto idle2 = idling_channels_for_layer(masked, 3, noise);
  REQUIRE(idle2.size() == 1);
  CHECK(idle2[0].qubit == 2);
}
