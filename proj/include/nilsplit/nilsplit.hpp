#pragma once

#include <nilsplit/algebra.hpp>
#include <nilsplit/catalog.hpp>
#include <nilsplit/cohomology.hpp>
#include <nilsplit/document.hpp>
#include <nilsplit/lie.hpp>
#include <nilsplit/linalg.hpp>
#include <nilsplit/rational.hpp>
#include <nilsplit/symplectic.hpp>
#include <nilsplit/twisted.hpp>
