#pragma once

#include <Eigen/Core>

#include <string>

#include "rerisk/io.hpp"
#include "rerisk/series.hpp"

namespace testing_support {

inline rerisk::Panel load_fixture(const std::string& name) {
    const std::string path = std::string(RERISK_TEST_DATA) + "/" + name;
    return rerisk::read_wide_csv(rerisk::read_text_file(path), path);
}

inline Eigen::VectorXd fixture_column(const std::string& file, const std::string& column) {
    const rerisk::Panel p = load_fixture(file);
    return p.values().col(p.column_of(column));
}

inline rerisk::ReturnSeries make_series(const Eigen::VectorXd& v, std::string label = "x",
                                        rerisk::YearMonth start = rerisk::YearMonth(2000, 1)) {
    return {std::move(label), rerisk::TimeGrid(start, v.size()), v};
}

}  // namespace testing_support
