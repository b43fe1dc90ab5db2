#pragma once

#include <hexcp/common.hpp>

namespace hexcp {

// 2x2 complex matrix, row major.
struct Mat2 {
    Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

    static Mat2 identity() { return Mat2{}; }

    Complex det() const { return m00 * m11 - m01 * m10; }
    Complex trace() const { return m00 + m11; }

    Mat2 operator*(const Mat2& o) const {
        return Mat2{m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                    m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Mat2 operator+(const Mat2& o) const {
        return Mat2{m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2 operator-(const Mat2& o) const {
        return Mat2{m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    Mat2 operator*(Complex s) const { return Mat2{m00 * s, m01 * s, m10 * s, m11 * s}; }

    // Adjugate; inverse up to the determinant factor.
    Mat2 adj() const { return Mat2{m11, -m01, -m10, m00}; }

    Mat2 inverse() const {
        Complex d = det();
        if (d == Complex(0.0)) throw SingularError("Mat2::inverse: singular matrix");
        return adj() * (Complex(1.0) / d);
    }

    Real frobenius() const {
        return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
    }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

} // namespace hexcp
