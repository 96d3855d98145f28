#include "qcut/mub.hpp"

#include <cmath>
#include <stdexcept>

namespace qcut {

namespace {

const cplx kUnitRoots[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

}  // namespace

Unitary phase_op(const gf::Field& field, std::uint32_t k) {
    const Eigen::Index d = field.size();
    Mat m = Mat::Zero(d, d);
    for (std::uint32_t l = 0; l < field.size(); ++l) {
        m(l, l) = gf::Field::sign_exp(field.mul(l, k));
    }
    return Unitary{std::move(m)};
}

Unitary shift_op(const gf::Field& field, std::uint32_t k) {
    const Eigen::Index d = field.size();
    Mat m = Mat::Zero(d, d);
    for (std::uint32_t l = 0; l < field.size(); ++l) {
        m(l, l ^ k) = 1.0;
    }
    return Unitary{std::move(m)};
}

cplx phase_factor(const gf::Field& field, std::uint32_t j, std::uint32_t k) {
    // Exponents of i accumulate modulo 4 on integer representations.
    std::uint32_t exponent = 0;
    const int n = field.degree();
    for (int r = 0; r < n; ++r) {
        if (!((k >> r) & 1u)) continue;
        for (int t = 0; t < n; ++t) {
            if (!((k >> t) & 1u)) continue;
            exponent += field.mul(field.mul(j, 1u << r), 1u << t);
        }
    }
    return kUnitRoots[exponent & 3u];
}

Unitary s_operator(const gf::Field& field, std::uint32_t j, std::uint32_t k) {
    Mat m = phase_factor(field, j, k) * phase_op(field, field.mul(j, k)).m *
            shift_op(field, k).m;
    return Unitary{std::move(m)};
}

Unitary mub_unitary(const gf::Field& field, std::uint32_t j) {
    const Eigen::Index d = field.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Mat m(d, d);
    for (std::uint32_t l = 0; l < field.size(); ++l) {
        for (std::uint32_t k = 0; k < field.size(); ++k) {
            m(k, l) = scale * static_cast<double>(gf::Field::sign_exp(field.mul(l, k))) *
                      std::conj(phase_factor(field, j, k));
        }
    }
    return Unitary{std::move(m)};
}

MubFamily::MubFamily(int n) : field_(n) {
    unitaries_.reserve(field_.size());
    for (std::uint32_t j = 0; j < field_.size(); ++j) {
        Unitary u = mub_unitary(field_, j);
        if (u.unitarity_error() > 1e-10) {
            throw std::logic_error("MubFamily: constructed basis transform not unitary");
        }
        unitaries_.push_back(std::move(u));
    }
}

double unbiasedness_defect(const MubFamily& mubs) {
    const Eigen::Index d = mubs.field().size();
    const double target = 1.0 / static_cast<double>(d);
    std::vector<Mat> bases;
    bases.reserve(mubs.count() + 1);
    for (const Unitary& u : mubs.unitaries()) bases.push_back(u.m);
    bases.push_back(Mat::Identity(d, d));

    double worst = 0.0;
    for (std::size_t a = 0; a < bases.size(); ++a) {
        for (std::size_t b = a + 1; b < bases.size(); ++b) {
            Mat overlaps = bases[a].adjoint() * bases[b];
            for (Eigen::Index l = 0; l < d; ++l) {
                for (Eigen::Index m = 0; m < d; ++m) {
                    worst = std::max(worst, std::abs(std::norm(overlaps(l, m)) - target));
                }
            }
        }
    }
    return worst;
}

}  // namespace qcut
