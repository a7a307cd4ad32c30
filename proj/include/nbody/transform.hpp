#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace nbody {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Signed permutation of the three coordinate axes: row i of the matrix has a
/// single entry sign[i] in column perm[i], so (R x)_i = sign[i] * x[perm[i]].
class OrthTransform {
public:
    /// Identity.
    OrthTransform();
    /// Throws std::invalid_argument unless perm is a permutation of {0,1,2}
    /// and every sign is ±1.
    OrthTransform(std::array<int, 3> perm, std::array<int, 3> sign);

    static OrthTransform diagonal(int sx, int sy, int sz);
    /// Builds from a 3×3 matrix with entries in {-1, 0, 1}.
    static OrthTransform from_matrix(const Mat3& m);

    Vec3 apply(const Vec3& x) const;
    Vec3 operator*(const Vec3& x) const { return apply(x); }
    /// Matrix product (*this) · rhs.
    OrthTransform operator*(const OrthTransform& rhs) const;

    OrthTransform inverse() const;
    Mat3 matrix() const;
    int determinant() const;
    int negative_entries() const;

    const std::array<int, 3>& perm() const { return perm_; }
    const std::array<int, 3>& sign() const { return sign_; }

    bool operator==(const OrthTransform& other) const = default;
    bool operator<(const OrthTransform& other) const;

    std::string to_string() const;

private:
    std::array<int, 3> perm_;
    std::array<int, 3> sign_;
};

/// The four π-rotations about the coordinate axes (including the identity).
std::vector<OrthTransform> klein_elements();

/// x -> y -> z -> x as a matrix acting on coordinates: (x, y, z) -> (z, x, y).
OrthTransform cyclic_permutation();

/// The 12 rotations generated by the Klein group and the cyclic permutation.
std::vector<OrthTransform> a4_elements();

/// All 48 signed permutations (the full cube group).
std::vector<OrthTransform> all_signed_permutations();

/// Closure of a generating set under composition, in a deterministic order.
std::vector<OrthTransform> group_closure(const std::vector<OrthTransform>& generators);

bool is_closed(const std::vector<OrthTransform>& elements);

} // namespace nbody
