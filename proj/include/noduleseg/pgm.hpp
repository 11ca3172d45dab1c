#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "noduleseg/image.hpp"

namespace nseg {

/// Raised on malformed PGM input; message names the byte offset.
class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Loads a binary PGM (P5, maxval <= 65535). 16-bit samples are big-endian.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Writes an 8- or 16-bit P5 PGM (16-bit if maxval above would exceed 255).
void save_gray_image(const GrayImage& img, const std::filesystem::path& path);

/// Writes an 8-bit P5 PGM, foreground = 255, background = 0.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// Reads a mask written by save_mask: any sample >= 128 is foreground.
BinaryMask load_mask(const std::filesystem::path& path);

}  // namespace nseg
