#pragma once

#include <gtest/gtest.h>

#include <random>

#include "lagmin/error.hpp"

#define EXPECT_KIND(stmt, k)                                                   \
    do {                                                                       \
        try {                                                                  \
            stmt;                                                              \
            ADD_FAILURE() << "no error, expected " << lagmin::kind_name(k);    \
        } catch (const lagmin::Error& e) {                                     \
            EXPECT_EQ(e.kind(), k) << e.what();                                \
        }                                                                      \
    } while (0)

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d v(g(rng), g(rng), g(rng));
    return v.normalized();
}
