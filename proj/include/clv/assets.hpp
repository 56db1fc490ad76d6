#pragma once

#include <string_view>

// Static files from assets/, compiled into the library.
namespace clv::assets {

std::string_view vernacular_dtd();
std::string_view coq_prelude();
std::string_view latex_preamble();
std::string_view html_style();

}  // namespace clv::assets
