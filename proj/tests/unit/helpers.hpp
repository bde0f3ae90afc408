#pragma once

#include "cricseg/frame.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testutil {

inline cricseg::Frame flat(int w, int h, std::uint8_t v, std::int64_t index = 0)
{
    return cricseg::Frame(index, 0.0, w, h, std::vector<std::uint8_t>(std::size_t(w) * h, v));
}

inline cricseg::Frame from_fn(int w, int h, std::int64_t index, auto&& fn)
{
    std::vector<std::uint8_t> px(std::size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            px[std::size_t(y) * w + x] = static_cast<std::uint8_t>(fn(x, y));
    return cricseg::Frame(index, 0.0, w, h, std::move(px));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("cricseg_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
