#include "nbody/transform.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nbody {

OrthTransform::OrthTransform() : perm_{0, 1, 2}, sign_{1, 1, 1} {}

OrthTransform::OrthTransform(std::array<int, 3> perm, std::array<int, 3> sign)
    : perm_(perm), sign_(sign)
{
    std::array<int, 3> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2})
        throw std::invalid_argument("OrthTransform: perm is not a permutation of {0,1,2}");
    for (int s : sign)
        if (s != 1 && s != -1)
            throw std::invalid_argument("OrthTransform: signs must be +1 or -1");
}

OrthTransform OrthTransform::diagonal(int sx, int sy, int sz)
{
    return OrthTransform({0, 1, 2}, {sx, sy, sz});
}

OrthTransform OrthTransform::from_matrix(const Mat3& m)
{
    std::array<int, 3> perm{-1, -1, -1};
    std::array<int, 3> sign{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double v = m(i, j);
            if (v == 0.0)
                continue;
            if ((v != 1.0 && v != -1.0) || perm[i] != -1)
                throw std::invalid_argument("matrix is not a signed permutation");
            perm[i] = j;
            sign[i] = v > 0 ? 1 : -1;
        }
    }
    return OrthTransform(perm, sign);
}

Vec3 OrthTransform::apply(const Vec3& x) const
{
    return {sign_[0] * x[perm_[0]], sign_[1] * x[perm_[1]], sign_[2] * x[perm_[2]]};
}

OrthTransform OrthTransform::operator*(const OrthTransform& rhs) const
{
    // (A B x)_i = sA[i] (B x)[pA[i]] = sA[i] sB[pA[i]] x[pB[pA[i]]]
    std::array<int, 3> perm{};
    std::array<int, 3> sign{};
    for (int i = 0; i < 3; ++i) {
        perm[i] = rhs.perm_[perm_[i]];
        sign[i] = sign_[i] * rhs.sign_[perm_[i]];
    }
    return OrthTransform(perm, sign);
}

OrthTransform OrthTransform::inverse() const
{
    // Orthogonal: inverse is the transpose.
    std::array<int, 3> perm{};
    std::array<int, 3> sign{};
    for (int i = 0; i < 3; ++i) {
        perm[perm_[i]] = i;
        sign[perm_[i]] = sign_[i];
    }
    return OrthTransform(perm, sign);
}

Mat3 OrthTransform::matrix() const
{
    Mat3 m = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        m(i, perm_[i]) = sign_[i];
    return m;
}

int OrthTransform::determinant() const
{
    // sign of the permutation times the product of signs
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm_[i] > perm_[j])
                ++inversions;
    const int perm_sign = inversions % 2 == 0 ? 1 : -1;
    return perm_sign * sign_[0] * sign_[1] * sign_[2];
}

int OrthTransform::negative_entries() const
{
    return static_cast<int>(std::count(sign_.begin(), sign_.end(), -1));
}

bool OrthTransform::operator<(const OrthTransform& other) const
{
    if (perm_ != other.perm_)
        return perm_ < other.perm_;
    return sign_ < other.sign_;
}

std::string OrthTransform::to_string() const
{
    static const char* axis = "xyz";
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < 3; ++i) {
        if (i)
            os << ',';
        os << (sign_[i] < 0 ? "-" : "") << axis[perm_[i]];
    }
    os << ')';
    return os.str();
}

std::vector<OrthTransform> klein_elements()
{
    return {OrthTransform::diagonal(1, 1, 1), OrthTransform::diagonal(1, -1, -1),
            OrthTransform::diagonal(-1, 1, -1), OrthTransform::diagonal(-1, -1, 1)};
}

OrthTransform cyclic_permutation()
{
    // new x = old z, new y = old x, new z = old y
    return OrthTransform({2, 0, 1}, {1, 1, 1});
}

std::vector<OrthTransform> group_closure(const std::vector<OrthTransform>& generators)
{
    std::vector<OrthTransform> elements{OrthTransform{}};
    std::set<OrthTransform> seen{OrthTransform{}};
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (const auto& g : generators) {
            const OrthTransform product = g * elements[i];
            if (seen.insert(product).second)
                elements.push_back(product);
        }
    }
    return elements;
}

std::vector<OrthTransform> a4_elements()
{
    auto gens = klein_elements();
    gens.push_back(cyclic_permutation());
    return group_closure(gens);
}

std::vector<OrthTransform> all_signed_permutations()
{
    std::vector<OrthTransform> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
        for (int mask = 0; mask < 8; ++mask)
            out.emplace_back(perm, std::array<int, 3>{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1,
                                                      mask & 4 ? -1 : 1});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

bool is_closed(const std::vector<OrthTransform>& elements)
{
    const std::set<OrthTransform> set(elements.begin(), elements.end());
    for (const auto& a : elements)
        for (const auto& b : elements)
            if (!set.count(a * b))
                return false;
    return true;
}

} // namespace nbody
