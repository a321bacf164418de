#pragma once

#define RMF_VERSION "0.1.0"
