#pragma once

#include <string>

#include "tspkit/signal.hpp"

namespace tspkit {

enum class WavFormat { pcm16, pcm24, float32 };

// RIFF/WAVE reader for PCM 16/24-bit and 32-bit float. Multichannel files
// yield the first channel; if `warning` is given it receives a note in that
// case. Malformed files raise ParseError (with the byte offset), unknown
// codecs UnsupportedFormatError.
SampledSignal read_wav(const std::string& path, std::string* warning = nullptr);

// Mono writer; float32 is bit-exact for float-representable samples.
void write_wav(const std::string& path, const SampledSignal& signal,
               WavFormat format = WavFormat::float32);

} // namespace tspkit
